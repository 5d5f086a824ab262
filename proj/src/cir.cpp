#include "scir/cir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scir/distributions.hpp"

namespace scir {

ShapeEstimate::ShapeEstimate(double prior_part, double count_part) : prior_part_(prior_part), count_part_(count_part) {
  if (!(prior_part > 0.0) || !std::isfinite(prior_part)) throw ParameterError("ShapeEstimate: prior part must be positive");
  if (!(count_part >= 0.0) || !std::isfinite(count_part)) {
    throw ParameterError("ShapeEstimate: count part must be finite and nonnegative");
  }
}

CIRChainState cir_transition(RngStream& rng, const CIRChainState& state, double a, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("cir_transition: stepsize must be positive and finite");
  if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("cir_transition: shape must be positive and finite");
  if (!(state.theta > 0.0) || !std::isfinite(state.theta)) throw ParameterError("cir_transition: theta must be positive");
  const double spread = -std::expm1(-h);  // 1 - e^{-h}
  const double noncentrality = 2.0 * state.theta * std::exp(-h) / spread;
  const double w = sample_noncentral_chisq(rng, NonCentralChiSq(2.0 * a, noncentrality));
  CIRChainState next;
  next.theta = std::max(0.5 * spread * w, std::numeric_limits<double>::min());
  next.step = state.step + 1;
  next.stepsize = h;
  return next;
}

CIRChainState scir_step(RngStream& rng, const CIRChainState& state, const ShapeEstimate& ahat, double h) {
  return cir_transition(rng, state, ahat.total(), h);
}

double generalized_gamma_cdf(double u, double a) {
  if (u <= 0.0) return 0.0;
  return cdf_gamma(transform_from_generalized_gamma(u), a, 1.0);
}

}  // namespace scir
