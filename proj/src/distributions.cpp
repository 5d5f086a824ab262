#include "scir/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>

#include "scir/errors.hpp"
#include "scir/special_functions.hpp"

namespace scir {
namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) throw ParameterError(std::string(what) + " must be positive and finite");
}

// Marsaglia and Tsang (2000); valid for shape >= 1.
double log_gamma_marsaglia_tsang(RngStream& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

}  // namespace

NonCentralChiSq::NonCentralChiSq(double dof_, double noncentrality_) : dof(dof_), noncentrality(noncentrality_) {
  require_positive(dof, "non-central chi-squared dof");
  if (!(noncentrality >= 0.0) || !std::isfinite(noncentrality)) {
    throw ParameterError("non-central chi-squared noncentrality must be finite and nonnegative");
  }
}

double sample_noncentral_chisq(RngStream& rng, const NonCentralChiSq& dist) {
  require_positive(dist.dof, "non-central chi-squared dof");
  if (!(dist.noncentrality >= 0.0) || !std::isfinite(dist.noncentrality)) {
    throw ParameterError("non-central chi-squared noncentrality must be finite and nonnegative");
  }
  const auto k = rng.poisson(0.5 * dist.noncentrality);
  return 2.0 * sample_gamma(rng, 0.5 * dist.dof + static_cast<double>(k), 1.0);
}

double sample_log_gamma(RngStream& rng, double shape) {
  require_positive(shape, "gamma shape");
  if (shape >= 1.0) return log_gamma_marsaglia_tsang(rng, shape);
  const double boosted = log_gamma_marsaglia_tsang(rng, shape + 1.0);
  return boosted + std::log(rng.uniform()) / shape;
}

double sample_gamma(RngStream& rng, double shape, double rate) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  const double draw = std::exp(sample_log_gamma(rng, shape)) / rate;
  return std::max(draw, std::numeric_limits<double>::min());
}

SimplexVector sample_dirichlet(RngStream& rng, const Eigen::Ref<const Eigen::VectorXd>& alpha) {
  if (alpha.size() == 0) throw ParameterError("dirichlet: empty parameter vector");
  Eigen::VectorXd log_draws(alpha.size());
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    require_positive(alpha[j], "dirichlet alpha");
    log_draws[j] = sample_log_gamma(rng, alpha[j]);
  }
  return SimplexVector::from_log(log_draws);
}

double sample_beta(RngStream& rng, double a, double b) {
  require_positive(a, "beta a");
  require_positive(b, "beta b");
  const double la = sample_log_gamma(rng, a);
  const double lb = sample_log_gamma(rng, b);
  // a / (a + b) = 1 / (1 + exp(lb - la))
  const double v = 1.0 / (1.0 + std::exp(lb - la));
  constexpr double lo = std::numeric_limits<double>::min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(v, lo, hi);
}

std::size_t sample_categorical(RngStream& rng, const Eigen::Ref<const Eigen::VectorXd>& weights) {
  if (weights.size() == 0) throw ParameterError("categorical: empty weights");
  if (!weights.allFinite() || (weights.array() < 0.0).any()) {
    throw ParameterError("categorical: weights must be finite and nonnegative");
  }
  const double total = weights.sum();
  if (!(total > 0.0)) throw DegenerateDistributionError("categorical: all weights are zero");
  const double target = rng.uniform() * total;
  double running = 0.0;
  std::size_t last_positive = 0;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    running += weights[j];
    last_positive = static_cast<std::size_t>(j);
    if (target < running) return last_positive;
  }
  return last_positive;
}

double cdf_beta(double x, double a, double b) {
  require_positive(a, "beta a");
  require_positive(b, "beta b");
  if (std::isnan(x)) throw ParameterError("cdf_beta: x is NaN");
  return special::beta_inc(x, a, b);
}

double cdf_gamma(double x, double shape, double rate) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  if (std::isnan(x)) throw ParameterError("cdf_gamma: x is NaN");
  return special::gamma_p(shape, x * rate);
}

}  // namespace scir
