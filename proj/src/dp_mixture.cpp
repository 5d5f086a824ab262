#include "scir/dp_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scir/distributions.hpp"
#include "scir/errors.hpp"

namespace scir {
namespace {

constexpr std::size_t kMaxComponents = 100000;

// Per-component category totals and sizes over the listed items.
struct ComponentStats {
  Eigen::MatrixXd counts;  // components x dim
  Eigen::VectorXd sizes;

  ComponentStats(std::size_t components, std::size_t dim)
      : counts(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(components), static_cast<Eigen::Index>(dim))),
        sizes(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(components))) {}

  void add(const Document& item, std::uint32_t j) {
    sizes[j] += 1.0;
    for (const auto& [category, count] : item.counts) counts(j, category) += count;
  }
};

Eigen::MatrixXd log_components(const DPState& state, std::size_t components) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(components), static_cast<Eigen::Index>(state.dim()));
  for (std::size_t j = 0; j < components; ++j) out.row(static_cast<Eigen::Index>(j)) = state.component(j).array().log().transpose();
  return out;
}

// p(z_i = j) ∝ 1(w_j > u_i) f(x_i | theta_j)
std::uint32_t sample_allocation(RngStream& rng, const Document& item, double slice, const Eigen::VectorXd& weights,
                                const Eigen::MatrixXd& log_theta) {
  const Eigen::Index k = log_theta.rows();
  Eigen::VectorXd log_w = Eigen::VectorXd::Constant(k, -std::numeric_limits<double>::infinity());
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!(weights[j] > slice)) continue;
    double ll = 0.0;
    for (const auto& [category, count] : item.counts) ll += count * log_theta(j, category);
    log_w[j] = ll;
  }
  if (!std::isfinite(log_w.maxCoeff())) {
    throw DegenerateDistributionError("dp allocation: no component above the slice");
  }
  const SimplexVector p = SimplexVector::from_log(log_w);
  return static_cast<std::uint32_t>(sample_categorical(rng, p.weights()));
}

// Drop components past Z*, then add prior components until the leftover
// stick mass prod (1 - v_j) falls below u*.
void reach_slice_level(RngStream& rng, DPState& state, double u_star, double base_concentration) {
  state.truncate(state.max_allocation());
  const double log_u_star = std::log(std::max(u_star, std::numeric_limits<double>::min()));
  double log_remaining = 0.0;
  for (std::size_t j = 0; j < state.components(); ++j) log_remaining += state.log_one_minus_stick(j);
  while (!(log_remaining < log_u_star)) {
    if (state.components() >= kMaxComponents) throw DegenerateDistributionError("dp slice sampler: too many components");
    state.append_from_prior(rng, base_concentration);
    log_remaining += state.log_one_minus_stick(state.components() - 1);
  }
  state.recompute_weights();
}

void sample_alpha(RngStream& rng, DPState& state, const DPHyper& hyper) {
  if (!hyper.sample_alpha) return;
  const std::size_t z_star = state.max_allocation();
  state.set_alpha(sample_gamma(rng, hyper.alpha_shape + static_cast<double>(z_star),
                               alpha_posterior_rate(state, hyper, z_star)));
}

}  // namespace

DPState::DPState(std::size_t dim, std::vector<std::uint32_t> z) : dim_(dim), z_(std::move(z)), u_(z_.size(), 0.0) {}

DPState DPState::initialize(RngStream& rng, const Corpus& data, const DPHyper& hyper, std::size_t components,
                            double alpha) {
  if (components == 0) throw ParameterError("DPState::initialize: need at least one component");
  if (data.size() == 0 || data.vocab_size() == 0) throw ParameterError("DPState::initialize: empty data");
  if (!(alpha > 0.0)) throw ParameterError("DPState::initialize: alpha must be positive");
  if (!(hyper.base_concentration > 0.0)) throw ParameterError("DPState::initialize: base concentration must be positive");
  std::vector<std::uint32_t> z(data.size());
  for (auto& zi : z) zi = static_cast<std::uint32_t>(rng.below(components));
  DPState state(data.vocab_size(), std::move(z));
  state.alpha_ = alpha;
  state.sizes_.assign(components, 0);
  ComponentStats stats(components, state.dim_);
  for (std::size_t i = 0; i < data.size(); ++i) {
    ++state.sizes_[state.z_[i]];
    stats.add(data[i], state.z_[i]);
  }
  const auto k = static_cast<Eigen::Index>(components);
  state.theta_chains_.resize(k, static_cast<Eigen::Index>(state.dim_));
  state.stick_chains_.resize(k, 2);
  double tail = stats.sizes.sum();
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index c = 0; c < state.theta_chains_.cols(); ++c) {
      state.theta_chains_(j, c) = sample_gamma(rng, hyper.base_concentration + stats.counts(j, c));
    }
    tail -= stats.sizes[j];
    state.stick_chains_(j, 0) = sample_gamma(rng, 1.0 + stats.sizes[j]);
    state.stick_chains_(j, 1) = sample_gamma(rng, alpha + std::max(tail, 0.0));
  }
  state.recompute_weights();
  return state;
}

double DPState::stick(std::size_t j) const {
  const auto r = static_cast<Eigen::Index>(j);
  return stick_chains_(r, 0) / (stick_chains_(r, 0) + stick_chains_(r, 1));
}

double DPState::log_one_minus_stick(std::size_t j) const {
  const auto r = static_cast<Eigen::Index>(j);
  return std::log(stick_chains_(r, 1)) - std::log(stick_chains_(r, 0) + stick_chains_(r, 1));
}

Eigen::VectorXd DPState::sticks() const {
  Eigen::VectorXd v(stick_chains_.rows());
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = stick(static_cast<std::size_t>(j));
  return v;
}

Eigen::VectorXd DPState::component(std::size_t j) const {
  const Eigen::VectorXd row = theta_chains_.row(static_cast<Eigen::Index>(j)).transpose();
  return row / row.sum();
}

Eigen::MatrixXd DPState::component_matrix() const {
  Eigen::MatrixXd out = theta_chains_;
  for (Eigen::Index j = 0; j < out.rows(); ++j) out.row(j) /= out.row(j).sum();
  return out;
}

std::size_t DPState::max_allocation() const {
  for (std::size_t j = sizes_.size(); j > 0; --j) {
    if (sizes_[j - 1] > 0) return j;
  }
  return 0;
}

std::size_t DPState::active_clusters() const {
  return static_cast<std::size_t>(std::count_if(sizes_.begin(), sizes_.end(), [](auto s) { return s > 0; }));
}

MixtureSample DPState::snapshot() const { return MixtureSample{weights_, component_matrix()}; }

void DPState::assign(std::size_t i, std::uint32_t j) {
  --sizes_[z_[i]];
  z_[i] = j;
  ++sizes_[j];
}

void DPState::recompute_weights() {
  weights_.resize(stick_chains_.rows());
  double log_remaining = 0.0;
  for (Eigen::Index j = 0; j < weights_.size(); ++j) {
    weights_[j] = stick(static_cast<std::size_t>(j)) * std::exp(log_remaining);
    log_remaining += log_one_minus_stick(static_cast<std::size_t>(j));
  }
}

void DPState::truncate(std::size_t count) {
  if (count < max_allocation()) throw ParameterError("DPState::truncate: would drop occupied components");
  const auto k = static_cast<Eigen::Index>(count);
  theta_chains_.conservativeResize(k, Eigen::NoChange);
  stick_chains_.conservativeResize(k, Eigen::NoChange);
  sizes_.resize(count);
  recompute_weights();
}

void DPState::append_from_prior(RngStream& rng, double base_concentration) {
  const Eigen::Index k = theta_chains_.rows();
  theta_chains_.conservativeResize(k + 1, static_cast<Eigen::Index>(dim_));
  stick_chains_.conservativeResize(k + 1, 2);
  for (Eigen::Index c = 0; c < theta_chains_.cols(); ++c) theta_chains_(k, c) = sample_gamma(rng, base_concentration);
  stick_chains_(k, 0) = sample_gamma(rng, 1.0);
  stick_chains_(k, 1) = sample_gamma(rng, alpha_);
  sizes_.push_back(0);
}

double alpha_posterior_rate(const DPState& state, const DPHyper& hyper, std::size_t z_star) {
  double rate = hyper.alpha_rate;
  for (std::size_t j = 0; j < z_star; ++j) rate -= state.log_one_minus_stick(j);
  return rate;
}

void dp_slice_gibbs_step(RngStream& rng, DPState& state, const Corpus& data, const DPHyper& hyper) {
  if (data.size() != state.items()) throw ParameterError("dp_slice_gibbs_step: data size mismatch");
  auto& u = state.slices();
  double u_star = 1.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    u[i] = rng.uniform() * state.weights()[state.allocations()[i]];
    u_star = std::min(u_star, u[i]);
  }
  reach_slice_level(rng, state, u_star, hyper.base_concentration);

  const std::size_t k = state.components();
  {
    const Eigen::MatrixXd log_theta = log_components(state, k);
    const Eigen::VectorXd weights = state.weights();
    for (std::size_t i = 0; i < data.size(); ++i) {
      state.assign(i, sample_allocation(rng, data[i], u[i], weights, log_theta));
    }
  }

  ComponentStats stats(k, state.dim());
  for (std::size_t i = 0; i < data.size(); ++i) stats.add(data[i], state.allocations()[i]);
  auto& theta = state.theta_chains();
  for (std::size_t j = 0; j < k; ++j) {
    for (Eigen::Index c = 0; c < theta.cols(); ++c) {
      theta(static_cast<Eigen::Index>(j), c) = sample_gamma(rng, hyper.base_concentration + stats.counts(static_cast<Eigen::Index>(j), c));
    }
  }
  auto& sticks = state.stick_chains();
  double tail = stats.sizes.sum();
  for (std::size_t j = 0; j < k; ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    tail -= stats.sizes[r];
    sticks(r, 0) = sample_gamma(rng, 1.0 + stats.sizes[r]);
    sticks(r, 1) = sample_gamma(rng, state.alpha() + std::max(tail, 0.0));
  }
  sample_alpha(rng, state, hyper);
  state.recompute_weights();
}

void dp_slice_stochastic_step(Dynamics dynamics, RngStream& rng, DPState& state, const Corpus& data,
                              const Minibatch& batch, const DPHyper& hyper, const DPStepsizes& h) {
  if (data.size() != state.items()) throw ParameterError("dp_slice_stochastic_step: data size mismatch");
  if (batch.size() == 0) throw ParameterError("dp_slice_stochastic_step: empty minibatch");
  const std::size_t z_star = state.max_allocation();
  const double scale = batch.scale();
  const auto zs = static_cast<Eigen::Index>(z_star);

  ComponentStats stats(z_star, state.dim());
  for (auto i : batch.indices) stats.add(data[i], state.allocations()[i]);

  // Sticks: A_j -> Gamma(1 + m_j), B_j -> Gamma(alpha + sum_{l>j} m_l), m scaled by N / n.
  {
    Eigen::VectorXd shape_a(zs);
    Eigen::VectorXd shape_b(zs);
    double tail = scale * stats.sizes.sum();
    for (Eigen::Index j = 0; j < zs; ++j) {
      const double m_hat = scale * stats.sizes[j];
      tail -= m_hat;
      shape_a[j] = 1.0 + m_hat;
      shape_b[j] = state.alpha() + std::max(tail, 0.0);
    }
    auto& sticks = state.stick_chains();
    Eigen::VectorXd a_chain = sticks.col(0).head(zs);
    Eigen::VectorXd b_chain = sticks.col(1).head(zs);
    advance(dynamics, rng, a_chain, shape_a, h.sticks);
    advance(dynamics, rng, b_chain, shape_b, h.sticks);
    sticks.col(0).head(zs) = a_chain;
    sticks.col(1).head(zs) = b_chain;
  }
  state.recompute_weights();

  // Components: theta_j -> Dir(a + (N / n) sum_{i in S_j} x_i).
  auto& theta = state.theta_chains();
  for (Eigen::Index j = 0; j < zs; ++j) {
    const Eigen::VectorXd ahat = (hyper.base_concentration + scale * stats.counts.row(j).array()).matrix().transpose();
    Eigen::VectorXd row = theta.row(j).transpose();
    advance(dynamics, rng, row, ahat, h.theta);
    theta.row(j) = row.transpose();
  }

  auto& u = state.slices();
  double u_star = 1.0;
  for (auto i : batch.indices) {
    u[i] = rng.uniform() * state.weights()[state.allocations()[i]];
    u_star = std::min(u_star, u[i]);
  }

  sample_alpha(rng, state, hyper);
  reach_slice_level(rng, state, u_star, hyper.base_concentration);

  const Eigen::MatrixXd log_theta = log_components(state, state.components());
  const Eigen::VectorXd weights = state.weights();
  for (auto i : batch.indices) state.assign(i, sample_allocation(rng, data[i], u[i], weights, log_theta));
}

}  // namespace scir
