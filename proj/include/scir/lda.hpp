#pragma once

// Online LDA where each topic-word row phi_k is the normalized vector of
// positive chains theta_{k,.}, advanced by SCIR or SGRLD from minibatch
// estimates beta + (D / |batch|) sum_l n_{l,k,w}.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scir/corpus.hpp"
#include "scir/evaluation.hpp"
#include "scir/rng.hpp"
#include "scir/simplex.hpp"

namespace scir {

struct LdaHyper {
  std::size_t topics = 3;  // K
  double alpha = 0.1;      // doc-topic prior
  double beta = 0.5;       // topic-word prior
};

// h_m = h (1 + m / tau)^{-kappa}
struct StepsizeSchedule {
  double h = 0.5;
  double tau = 10.0;
  double kappa = 0.33;

  double at(std::uint64_t m) const;
};

struct TopicWordCount {
  std::uint32_t topic;
  std::uint32_t word;
  std::uint32_t count;
};

class LdaState {
 public:
  LdaState(LdaHyper hyper, Eigen::MatrixXd chains);
  // Chains start at independent Gamma(1, 1) draws.
  static LdaState initialize(RngStream& rng, const LdaHyper& hyper, std::size_t vocab_size);

  const LdaHyper& hyper() const { return hyper_; }
  std::size_t topics() const { return static_cast<std::size_t>(chains_.rows()); }
  std::size_t vocab_size() const { return static_cast<std::size_t>(chains_.cols()); }
  std::uint64_t step() const { return step_; }

  const Eigen::MatrixXd& chains() const { return chains_; }
  Eigen::MatrixXd& chains() { return chains_; }
  void advance_step() { ++step_; }

  // K x V matrix with rows on the simplex.
  Eigen::MatrixXd phi() const;
  SimplexVector phi_row(std::size_t k) const;

 private:
  LdaHyper hyper_;
  Eigen::MatrixXd chains_;
  std::uint64_t step_ = 0;
};

// Gibbs sweeps over the token-topic assignments of one document with its
// topic proportions collapsed: p(z = k) ∝ (alpha + c_k^{-token}) phi_{k,w}.
// Returns the topic-word counts of the final sweep.
std::vector<TopicWordCount> lda_local_z_sweep(RngStream& rng, const Document& doc,
                                              const Eigen::Ref<const Eigen::MatrixXd>& phi, double alpha,
                                              std::size_t sweeps);

// One online step over a minibatch of document indices into `corpus`.
void lda_step(Dynamics dynamics, RngStream& rng, LdaState& state, const Corpus& corpus, const Minibatch& batch,
              double h, std::size_t sweeps);
void lda_scir_step(RngStream& rng, LdaState& state, const Corpus& corpus, const Minibatch& batch, double h,
                   std::size_t sweeps);
void lda_sgrld_step(RngStream& rng, LdaState& state, const Corpus& corpus, const Minibatch& batch, double h,
                    std::size_t sweeps);

// Posterior mean of a document's topic proportions under fixed phi, from
// Gibbs sweeps over `tokens` (the first half of each sweep count is burn-in).
Eigen::VectorXd estimate_doc_topics(RngStream& rng, std::span<const std::uint32_t> tokens,
                                    const Eigen::Ref<const Eigen::MatrixXd>& phi, double alpha, std::size_t sweeps);

// Document-completion perplexity averaged over the supplied phi samples.
double lda_perplexity(RngStream& rng, std::span<const HeldoutDocument> heldout,
                      std::span<const Eigen::MatrixXd> phi_samples, double alpha, std::size_t sweeps);

}  // namespace scir
