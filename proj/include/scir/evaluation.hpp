#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scir/corpus.hpp"

namespace scir {

// Rows are simplex samples x^(m), columns the d coordinates.
using SampleMatrix = Eigen::MatrixXd;

struct RosenblattResult {
  Eigen::VectorXd uniforms;  // d - 1 coordinates
  std::size_t flags = 0;     // coordinates whose residual mass was not positive
};

// Successive Dirichlet conditionals: coordinate k maps through the
// Beta(alpha_k, sum_{l>k} alpha_l) CDF at x_k / sum_{j>=k} x_j.
RosenblattResult rosenblatt_transform(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                      const Eigen::Ref<const Eigen::VectorXd>& alpha);

// sup_x |F_hat(x) - x| of the empirical CDF of `values` against U(0, 1).
double ks_uniform(std::vector<double> values);

struct KSReport {
  Eigen::VectorXd per_dim;  // sup distance per transformed coordinate
  double d_ks = 0.0;        // mean of per_dim
  std::size_t samples = 0;  // M
  std::size_t dim = 0;      // d
  std::size_t flags = 0;    // residual-mass clamps over all rows
  bool degenerate = false;  // some transformed coordinate has zero spread

  double per_dim_max() const { return per_dim.size() ? per_dim.maxCoeff() : 0.0; }
};

KSReport dirichlet_ks_distance(const Eigen::Ref<const SampleMatrix>& samples,
                               const Eigen::Ref<const Eigen::VectorXd>& alpha);

// CSV columns: seed,method,minibatch_fraction,d_ks,per_dim_max,flags
std::string ks_report_csv_header();
std::string ks_report_csv_row(const KSReport& report, std::uint64_t seed, const std::string& method,
                              double minibatch_fraction);

// Held-out document split for document completion.
struct HeldoutDocument {
  std::vector<std::uint32_t> estimation;  // even-indexed tokens
  std::vector<std::uint32_t> evaluation;  // odd-indexed tokens
};

HeldoutDocument split_for_completion(const Document& doc);
std::vector<HeldoutDocument> split_for_completion(const Corpus& corpus);

// p(word | doc) for a held-out document index.
using PredictiveFn = std::function<double(std::size_t doc, std::uint32_t word)>;

// exp(-sum log p(w) / #evaluation tokens). Returns +inf if any evaluation
// token has zero predictive probability.
double perplexity(std::span<const HeldoutDocument> heldout, const PredictiveFn& predictive);

// Mixture posterior sample: weights over components and one categorical
// parameter vector per component (rows).
struct MixtureSample {
  Eigen::VectorXd weights;
  Eigen::MatrixXd components;
};

// log Multi(x; n, theta) including the multinomial coefficient.
double log_multinomial(const Document& counts, const Eigen::Ref<const Eigen::VectorXd>& theta);

// Mean over samples and held-out items of log sum_j w_j Multi(x_i; n_i, theta_j).
double log_predictive(const Corpus& heldout, std::span<const MixtureSample> samples);

}  // namespace scir
