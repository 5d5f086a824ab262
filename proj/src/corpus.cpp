#include "scir/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "scir/errors.hpp"

namespace scir {

std::uint64_t Document::length() const {
  std::uint64_t n = 0;
  for (const auto& [word, count] : counts) n += count;
  return n;
}

std::vector<std::uint32_t> Document::tokens() const {
  std::vector<std::uint32_t> out;
  out.reserve(length());
  for (const auto& [word, count] : counts) out.insert(out.end(), count, word);
  return out;
}

Corpus::Corpus(std::size_t vocab_size, std::vector<Document> docs) : vocab_size_(vocab_size), docs_(std::move(docs)) {
  for (auto& doc : docs_) {
    std::sort(doc.counts.begin(), doc.counts.end());
    for (const auto& [word, count] : doc.counts) {
      if (word >= vocab_size_) throw ParameterError("Corpus: word id " + std::to_string(word) + " >= vocab size");
    }
  }
}

std::uint64_t Corpus::total_tokens() const {
  std::uint64_t n = 0;
  for (const auto& doc : docs_) n += doc.length();
  return n;
}

std::pair<Corpus, Corpus> Corpus::split_tail(std::size_t count) const {
  if (count > docs_.size()) throw ParameterError("Corpus::split_tail: not enough items");
  const auto cut = docs_.begin() + static_cast<std::ptrdiff_t>(docs_.size() - count);
  return {Corpus(vocab_size_, std::vector<Document>(docs_.begin(), cut)),
          Corpus(vocab_size_, std::vector<Document>(cut, docs_.end()))};
}

namespace {

std::uint64_t parse_header_field(const std::string& header, const std::string& key) {
  const auto pos = header.find(key);
  if (pos == std::string::npos) throw std::runtime_error("corpus header missing '" + key + "'");
  return std::stoull(header.substr(pos + key.size()));
}

}  // namespace

Corpus Corpus::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw std::runtime_error("corpus: expected header line '#vocab=V #items=L'");
  }
  const auto vocab = parse_header_field(line, "#vocab=");
  const auto items = parse_header_field(line, "#items=");
  std::vector<Document> docs;
  docs.reserve(items);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("corpus line " + std::to_string(line_no) + ": missing tab");
    Document doc;
    doc.id = line.substr(0, tab);
    std::istringstream fields(line.substr(tab + 1));
    std::string field;
    while (fields >> field) {
      const auto colon = field.find(':');
      if (colon == std::string::npos) throw std::runtime_error("corpus line " + std::to_string(line_no) + ": bad field '" + field + "'");
      const auto word = std::stoul(field.substr(0, colon));
      const auto count = std::stoul(field.substr(colon + 1));
      if (count > 0) doc.counts.emplace_back(static_cast<std::uint32_t>(word), static_cast<std::uint32_t>(count));
    }
    docs.push_back(std::move(doc));
  }
  if (docs.size() != items) {
    throw std::runtime_error("corpus: header declares " + std::to_string(items) + " items, found " + std::to_string(docs.size()));
  }
  return Corpus(vocab, std::move(docs));
}

Corpus Corpus::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file '" + path + "'");
  return read(in);
}

void Corpus::write(std::ostream& out) const {
  out << "#vocab=" << vocab_size_ << " #items=" << docs_.size() << '\n';
  for (const auto& doc : docs_) {
    out << doc.id << '\t';
    bool first = true;
    for (const auto& [word, count] : doc.counts) {
      if (!first) out << ' ';
      out << word << ':' << count;
      first = false;
    }
    out << '\n';
  }
}

void Corpus::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file '" + path + "'");
  write(out);
}

}  // namespace scir
