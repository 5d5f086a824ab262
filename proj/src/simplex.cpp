#include "scir/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "scir/distributions.hpp"
#include "scir/errors.hpp"

namespace scir {

const char* to_string(Dynamics dynamics) { return dynamics == Dynamics::scir ? "scir" : "sgrld"; }

Dynamics dynamics_from_string(const std::string& name) {
  if (name == "scir") return Dynamics::scir;
  if (name == "sgrld") return Dynamics::sgrld;
  throw ParameterError("unknown dynamics '" + name + "'");
}

Minibatch Minibatch::sample(RngStream& rng, std::size_t population, std::size_t n) {
  if (n == 0 || n > population) throw ParameterError("Minibatch::sample: need 0 < n <= population");
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return Minibatch{std::move(pool), population};
}

Minibatch Minibatch::full(std::size_t population) {
  std::vector<std::size_t> all(population);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return Minibatch{std::move(all), population};
}

std::uint64_t SparseCounts::operator[](std::size_t category) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), category,
                             [](const auto& entry, std::size_t key) { return entry.first < key; });
  return (it != entries.end() && it->first == category) ? it->second : 0;
}

std::uint64_t SparseCounts::total() const {
  std::uint64_t sum = 0;
  for (const auto& [category, count] : entries) sum += count;
  return sum;
}

Eigen::VectorXd SparseCounts::dense() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& [category, count] : entries) out[static_cast<Eigen::Index>(category)] = static_cast<double>(count);
  return out;
}

SparseCounts SparseCounts::from_dense(const std::vector<std::uint64_t>& counts, std::size_t num_items) {
  SparseCounts out;
  out.dim = counts.size();
  out.num_items = num_items;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] > 0) out.entries.emplace_back(j, counts[j]);
  }
  return out;
}

CategoricalData::CategoricalData(std::size_t dim, std::vector<std::uint32_t> labels)
    : dim_(dim), labels_(std::move(labels)) {
  if (dim_ == 0) throw ParameterError("CategoricalData: dim must be positive");
  for (auto label : labels_) {
    if (label >= dim_) throw ParameterError("CategoricalData: label out of range");
  }
}

CategoricalData CategoricalData::from_totals(const std::vector<std::uint64_t>& totals) {
  std::vector<std::uint32_t> labels;
  for (std::size_t j = 0; j < totals.size(); ++j) labels.insert(labels.end(), totals[j], static_cast<std::uint32_t>(j));
  return CategoricalData(totals.size(), std::move(labels));
}

SparseCounts CategoricalData::totals() const { return count(Minibatch::full(labels_.size())); }

SparseCounts CategoricalData::count(const Minibatch& batch) const {
  std::vector<std::uint64_t> dense(dim_, 0);
  for (auto i : batch.indices) {
    if (i >= labels_.size()) throw ParameterError("CategoricalData::count: index out of range");
    ++dense[labels_[i]];
  }
  return SparseCounts::from_dense(dense, labels_.size());
}

ShapeEstimate estimate_shape(double prior, std::uint64_t batch_count, std::size_t N, std::size_t n) {
  if (n == 0) throw ParameterError("estimate_shape: minibatch size must be positive");
  if (n > N) throw ParameterError("estimate_shape: minibatch larger than dataset");
  const double scale = static_cast<double>(N) / static_cast<double>(n);
  return ShapeEstimate(prior, scale * static_cast<double>(batch_count));
}

Eigen::VectorXd estimate_shapes(const Eigen::Ref<const Eigen::VectorXd>& prior, const SparseCounts& batch_counts,
                                std::size_t N, std::size_t n) {
  if (n == 0) throw ParameterError("estimate_shapes: minibatch size must be positive");
  if (n > N) throw ParameterError("estimate_shapes: minibatch larger than dataset");
  if (static_cast<std::size_t>(prior.size()) != batch_counts.dim) throw ParameterError("estimate_shapes: dimension mismatch");
  Eigen::VectorXd ahat = prior;
  const double scale = static_cast<double>(N) / static_cast<double>(n);
  for (const auto& [category, count] : batch_counts.entries) {
    ahat[static_cast<Eigen::Index>(category)] += scale * static_cast<double>(count);
  }
  return ahat;
}

double shape_estimate_variance(std::uint64_t total, std::size_t N, std::size_t n) {
  if (n == 0 || n > N) throw ParameterError("shape_estimate_variance: need 0 < n <= N");
  if (N < 2) return 0.0;
  const double Nd = static_cast<double>(N);
  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(total) / Nd;
  const double hypergeometric = nd * p * (1.0 - p) * (Nd - nd) / (Nd - 1.0);
  const double scale = Nd / nd;
  return scale * scale * hypergeometric;
}

void advance_scir(RngStream& rng, Eigen::Ref<Eigen::VectorXd> theta, const Eigen::Ref<const Eigen::VectorXd>& ahat,
                  double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("advance_scir: stepsize must be positive and finite");
  if (theta.size() != ahat.size()) throw ParameterError("advance_scir: dimension mismatch");
  CIRChainState coordinate;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    coordinate.theta = theta[j];
    theta[j] = cir_transition(rng, coordinate, ahat[j], h).theta;
  }
}

double sgrld_update(double theta, double ahat, double h, double eta) {
  const double moved = theta + h * (ahat - theta) + std::sqrt(2.0 * h * theta) * eta;
  return std::max(std::abs(moved), kSgrldFloor);
}

void advance_sgrld(RngStream& rng, Eigen::Ref<Eigen::VectorXd> theta, const Eigen::Ref<const Eigen::VectorXd>& ahat,
                   double h) {
  if (!(h >= 0.0) || !std::isfinite(h)) throw ParameterError("advance_sgrld: stepsize must be nonnegative and finite");
  if (theta.size() != ahat.size()) throw ParameterError("advance_sgrld: dimension mismatch");
  if (h == 0.0) return;
  for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] = sgrld_update(theta[j], ahat[j], h, rng.normal());
}

void advance(Dynamics dynamics, RngStream& rng, Eigen::Ref<Eigen::VectorXd> theta,
             const Eigen::Ref<const Eigen::VectorXd>& ahat, double h) {
  if (dynamics == Dynamics::scir) {
    advance_scir(rng, theta, ahat, h);
  } else {
    advance_sgrld(rng, theta, ahat, h);
  }
}

SimplexChain::SimplexChain(Eigen::VectorXd initial_theta, Eigen::VectorXd prior_)
    : theta(std::move(initial_theta)), prior(std::move(prior_)) {
  if (theta.size() == 0 || theta.size() != prior.size()) throw ParameterError("SimplexChain: dimension mismatch");
  if (!(theta.array() > 0.0).all() || !theta.allFinite()) throw ParameterError("SimplexChain: coordinates must be positive");
  if (!(prior.array() > 0.0).all() || !prior.allFinite()) throw ParameterError("SimplexChain: prior must be positive");
}

SimplexStep simplex_step(Dynamics dynamics, RngStream& rng, const SimplexChain& chain, const Minibatch& batch,
                         const CategoricalData& data, double h) {
  if (static_cast<std::size_t>(chain.theta.size()) != data.dim()) throw ParameterError("simplex_step: dimension mismatch");
  const Eigen::VectorXd ahat = estimate_shapes(chain.prior, data.count(batch), data.size(), batch.size());
  SimplexChain next = chain;
  advance(dynamics, rng, next.theta, ahat, h);
  ++next.step;
  SimplexVector omega = next.omega();
  return SimplexStep{std::move(next), std::move(omega)};
}

SimplexStep scir_simplex_step(RngStream& rng, const SimplexChain& chain, const Minibatch& batch,
                              const CategoricalData& data, double h) {
  return simplex_step(Dynamics::scir, rng, chain, batch, data, h);
}

SimplexStep sgrld_simplex_step(RngStream& rng, const SimplexChain& chain, const Minibatch& batch,
                               const CategoricalData& data, double h) {
  return simplex_step(Dynamics::sgrld, rng, chain, batch, data, h);
}

SimplexVector exact_dirichlet_posterior(RngStream& rng, const Eigen::Ref<const Eigen::VectorXd>& alpha,
                                        const SparseCounts& counts) {
  if (static_cast<std::size_t>(alpha.size()) != counts.dim) throw ParameterError("exact_dirichlet_posterior: dimension mismatch");
  return sample_dirichlet(rng, alpha + counts.dense());
}

}  // namespace scir
