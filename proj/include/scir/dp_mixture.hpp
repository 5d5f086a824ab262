#pragma once

// Dirichlet process mixture of multinomials, x_i | z_i ~ Multi(n_i, theta_{z_i}),
// theta_j ~ Dir(a), sampled through the stick-breaking slice sampler.
//
// Every stick v_j is held as a pair of positive chains (A_j, B_j) with
// v_j = A_j / (A_j + B_j), and every component theta_j as a row of positive
// chains normalized onto the simplex. The exact sampler draws these chains
// from their gamma conditionals; the stochastic sampler advances them with
// SCIR or SGRLD from minibatch estimates of the same shapes.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "scir/corpus.hpp"
#include "scir/evaluation.hpp"
#include "scir/rng.hpp"
#include "scir/simplex.hpp"

namespace scir {

struct DPHyper {
  double base_concentration = 0.5;  // a in Dir(a)
  double alpha_shape = 1.0;         // b1
  double alpha_rate = 1.0;          // b2
  bool sample_alpha = true;
};

class DPState {
 public:
  // z_i uniform over `components`, then sticks and components drawn from
  // their exact conditionals given z. alpha starts at `alpha`.
  static DPState initialize(RngStream& rng, const Corpus& data, const DPHyper& hyper, std::size_t components,
                            double alpha);

  std::size_t dim() const { return dim_; }
  std::size_t components() const { return static_cast<std::size_t>(theta_chains_.rows()); }
  std::size_t items() const { return z_.size(); }
  double alpha() const { return alpha_; }
  void set_alpha(double alpha) { alpha_ = alpha; }

  const std::vector<std::uint32_t>& allocations() const { return z_; }
  const std::vector<double>& slices() const { return u_; }
  const std::vector<std::uint64_t>& cluster_sizes() const { return sizes_; }

  double stick(std::size_t j) const;
  // log(1 - v_j) computed from the chains, finite even when v_j rounds to 1.
  double log_one_minus_stick(std::size_t j) const;
  Eigen::VectorXd sticks() const;
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::VectorXd component(std::size_t j) const;  // theta_j on the simplex
  Eigen::MatrixXd component_matrix() const;         // rows theta_j

  // 1 + index of the last occupied component (Z*).
  std::size_t max_allocation() const;
  std::size_t active_clusters() const;

  MixtureSample snapshot() const;

  // Chain access for the samplers.
  Eigen::MatrixXd& theta_chains() { return theta_chains_; }
  Eigen::MatrixXd& stick_chains() { return stick_chains_; }
  const Eigen::MatrixXd& stick_chains() const { return stick_chains_; }
  std::vector<double>& slices() { return u_; }
  void assign(std::size_t i, std::uint32_t j);
  void recompute_weights();
  void truncate(std::size_t count);
  void append_from_prior(RngStream& rng, double base_concentration);

 private:
  DPState(std::size_t dim, std::vector<std::uint32_t> z);

  std::size_t dim_;
  Eigen::MatrixXd theta_chains_;  // components x dim
  Eigen::MatrixXd stick_chains_;  // components x 2 (A, B)
  Eigen::VectorXd weights_;
  std::vector<std::uint32_t> z_;
  std::vector<double> u_;
  std::vector<std::uint64_t> sizes_;
  double alpha_ = 1.0;
};

// One exact sweep: slices, extend to k*, allocations, components, sticks,
// alpha (if enabled), weights.
void dp_slice_gibbs_step(RngStream& rng, DPState& state, const Corpus& data, const DPHyper& hyper);

struct DPStepsizes {
  double theta = 0.1;  // h for component chains
  double sticks = 0.1;  // h for stick chains
};

// Minibatch slice sampler: sticks and components advanced by `dynamics`
// from (N / n)-scaled minibatch statistics; slices and allocations updated
// for the minibatch only.
void dp_slice_stochastic_step(Dynamics dynamics, RngStream& rng, DPState& state, const Corpus& data,
                              const Minibatch& batch, const DPHyper& hyper, const DPStepsizes& h);

// Posterior rate of alpha | v_{1:Z*} under a Gamma(b1, b2) prior: b2 - sum log(1 - v_j).
double alpha_posterior_rate(const DPState& state, const DPHyper& hyper, std::size_t z_star);

}  // namespace scir
