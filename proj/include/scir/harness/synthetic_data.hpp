#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scir/corpus.hpp"
#include "scir/rng.hpp"

namespace scir::harness {

// Generating parameters kept next to a synthetic LDA corpus.
struct LdaTruth {
  Eigen::MatrixXd phi;  // topics x vocab
  double doc_concentration = 0.0;
};

struct LdaDataset {
  Corpus train;
  Corpus heldout;
  LdaTruth truth;
};

// phi_k ~ Dir(sparsity), theta_l ~ Dir(doc_concentration), doc_length
// tokens per document.
LdaDataset generate_synthetic_corpus(RngStream& rng, std::size_t topics, std::size_t vocab, std::size_t docs,
                                     std::size_t doc_length, double sparsity, double doc_concentration = 0.2,
                                     std::size_t heldout_docs = 0);

struct MixtureTruth {
  Eigen::VectorXd weights;
  Eigen::MatrixXd components;  // clusters x dim
};

struct MixtureDataset {
  Corpus train;
  Corpus heldout;
  MixtureTruth truth;
  std::vector<std::uint32_t> train_labels;
};

// Equal-weight mixture of `clusters` multinomials with theta_j ~ Dir(sparsity);
// each user holds 1 + Poisson(observations - 1) draws.
MixtureDataset generate_mixture_data(RngStream& rng, std::size_t clusters, std::size_t users, std::size_t dim,
                                     std::size_t observations, double sparsity, std::size_t heldout_users = 0);

// Text sidecars: a `#key=value ...` header line then one matrix row per line.
void write_lda_truth(const std::string& path, const LdaTruth& truth);
LdaTruth read_lda_truth(const std::string& path);
void write_mixture_truth(const std::string& path, const MixtureTruth& truth);
MixtureTruth read_mixture_truth(const std::string& path);

}  // namespace scir::harness
