#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace scir {

// One item: sparse (word, count) pairs sorted by word.
struct Document {
  std::string id;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;

  std::uint64_t length() const;
  // Tokens in word order, each word repeated by its count.
  std::vector<std::uint32_t> tokens() const;
};

// Documents for LDA, or per-user category counts for the mixture model.
//
// Text format: a header `#vocab=V #items=L`, then one item per line,
// `item_id<TAB>word:count word:count ...`, zero-based decimal word ids.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::size_t vocab_size, std::vector<Document> docs);

  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t size() const { return docs_.size(); }
  const std::vector<Document>& docs() const { return docs_; }
  const Document& operator[](std::size_t i) const { return docs_[i]; }
  std::uint64_t total_tokens() const;

  // Splits off the last `count` items.
  std::pair<Corpus, Corpus> split_tail(std::size_t count) const;

  static Corpus read(std::istream& in);
  static Corpus read_file(const std::string& path);
  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

 private:
  std::size_t vocab_size_ = 0;
  std::vector<Document> docs_;
};

}  // namespace scir
