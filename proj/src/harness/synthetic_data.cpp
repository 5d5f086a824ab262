#include "scir/harness/synthetic_data.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "scir/distributions.hpp"
#include "scir/errors.hpp"

namespace scir::harness {
namespace {

Document make_document(std::string id, const std::map<std::uint32_t, std::uint32_t>& counts) {
  Document doc;
  doc.id = std::move(id);
  doc.counts.assign(counts.begin(), counts.end());
  return doc;
}

std::string item_id(const char* prefix, std::size_t i) {
  std::ostringstream os;
  os << prefix << i;
  return os.str();
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out.precision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m(r, c);
    out << '\n';
  }
}

std::map<std::string, double> read_header(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("empty truth file '" + path + "'");
  std::map<std::string, double> fields;
  std::istringstream ls(line);
  std::string token;
  while (ls >> token) {
    if (token.empty() || token[0] != '#') throw ParameterError("malformed truth header in '" + path + "'");
    auto eq = token.find('=');
    if (eq == std::string::npos) throw ParameterError("malformed truth header in '" + path + "'");
    fields[token.substr(1, eq - 1)] = std::stod(token.substr(eq + 1));
  }
  return fields;
}

Eigen::MatrixXd read_matrix(std::istream& in, std::size_t rows, std::size_t cols, const std::string& path) {
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (!(in >> m(r, c))) throw ParameterError("truncated truth file '" + path + "'");
  return m;
}

std::size_t field(const std::map<std::string, double>& f, const std::string& key, const std::string& path) {
  auto it = f.find(key);
  if (it == f.end()) throw ParameterError("truth file '" + path + "' lacks '" + key + "'");
  return static_cast<std::size_t>(it->second);
}

}  // namespace

LdaDataset generate_synthetic_corpus(RngStream& rng, std::size_t topics, std::size_t vocab, std::size_t docs,
                                     std::size_t doc_length, double sparsity, double doc_concentration,
                                     std::size_t heldout_docs) {
  if (topics == 0 || vocab == 0 || docs == 0 || doc_length == 0)
    throw ParameterError("synthetic corpus sizes must be positive");
  if (!(sparsity > 0) || !(doc_concentration > 0))
    throw ParameterError("synthetic corpus concentrations must be positive");

  LdaTruth truth;
  truth.doc_concentration = doc_concentration;
  truth.phi.resize(topics, vocab);
  const Eigen::VectorXd topic_prior = Eigen::VectorXd::Constant(vocab, sparsity);
  for (std::size_t k = 0; k < topics; ++k) truth.phi.row(k) = sample_dirichlet(rng, topic_prior).weights().transpose();

  const Eigen::VectorXd doc_prior = Eigen::VectorXd::Constant(topics, doc_concentration);
  std::vector<Document> all;
  all.reserve(docs + heldout_docs);
  for (std::size_t d = 0; d < docs + heldout_docs; ++d) {
    const Eigen::VectorXd theta = sample_dirichlet(rng, doc_prior).weights();
    std::map<std::uint32_t, std::uint32_t> counts;
    for (std::size_t t = 0; t < doc_length; ++t) {
      const auto k = sample_categorical(rng, theta);
      const auto w = sample_categorical(rng, truth.phi.row(k).transpose());
      ++counts[static_cast<std::uint32_t>(w)];
    }
    all.push_back(make_document(item_id("doc", d), counts));
  }
  Corpus full(vocab, std::move(all));
  auto [train, heldout] = full.split_tail(heldout_docs);
  return {std::move(train), std::move(heldout), std::move(truth)};
}

MixtureDataset generate_mixture_data(RngStream& rng, std::size_t clusters, std::size_t users, std::size_t dim,
                                     std::size_t observations, double sparsity, std::size_t heldout_users) {
  if (clusters == 0 || users == 0 || dim == 0 || observations == 0)
    throw ParameterError("mixture data sizes must be positive");
  if (!(sparsity > 0)) throw ParameterError("cluster sparsity must be positive");

  MixtureTruth truth;
  truth.weights = Eigen::VectorXd::Constant(clusters, 1.0 / static_cast<double>(clusters));
  truth.components.resize(clusters, dim);
  const Eigen::VectorXd prior = Eigen::VectorXd::Constant(dim, sparsity);
  for (std::size_t j = 0; j < clusters; ++j)
    truth.components.row(j) = sample_dirichlet(rng, prior).weights().transpose();

  MixtureDataset out;
  std::vector<Document> all;
  all.reserve(users + heldout_users);
  for (std::size_t i = 0; i < users + heldout_users; ++i) {
    const auto z = sample_categorical(rng, truth.weights);
    if (i < users) out.train_labels.push_back(static_cast<std::uint32_t>(z));
    const std::uint64_t n = 1 + rng.poisson(static_cast<double>(observations) - 1.0);
    std::map<std::uint32_t, std::uint32_t> counts;
    for (std::uint64_t t = 0; t < n; ++t)
      ++counts[static_cast<std::uint32_t>(sample_categorical(rng, truth.components.row(z).transpose()))];
    all.push_back(make_document(item_id("user", i), counts));
  }
  Corpus full(dim, std::move(all));
  auto [train, heldout] = full.split_tail(heldout_users);
  out.train = std::move(train);
  out.heldout = std::move(heldout);
  out.truth = std::move(truth);
  return out;
}

void write_lda_truth(const std::string& path, const LdaTruth& truth) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.precision(17);
  out << "#topics=" << truth.phi.rows() << " #vocab=" << truth.phi.cols()
      << " #doc_concentration=" << truth.doc_concentration << '\n';
  write_matrix(out, truth.phi);
}

LdaTruth read_lda_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  const auto header = read_header(in, path);
  LdaTruth truth;
  auto it = header.find("doc_concentration");
  if (it == header.end()) throw ParameterError("truth file '" + path + "' lacks 'doc_concentration'");
  truth.doc_concentration = it->second;
  truth.phi = read_matrix(in, field(header, "topics", path), field(header, "vocab", path), path);
  return truth;
}

void write_mixture_truth(const std::string& path, const MixtureTruth& truth) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "#clusters=" << truth.components.rows() << " #dim=" << truth.components.cols() << '\n';
  write_matrix(out, truth.weights.transpose());
  write_matrix(out, truth.components);
}

MixtureTruth read_mixture_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  const auto header = read_header(in, path);
  const auto clusters = field(header, "clusters", path);
  MixtureTruth truth;
  truth.weights = read_matrix(in, 1, clusters, path).row(0).transpose();
  truth.components = read_matrix(in, clusters, field(header, "dim", path), path);
  return truth;
}

}  // namespace scir::harness
