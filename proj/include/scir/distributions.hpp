#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "scir/rng.hpp"
#include "scir/simplex_vector.hpp"

namespace scir {

// chi^2(dof, noncentrality) with real, possibly fractional, dof.
struct NonCentralChiSq {
  double dof;
  double noncentrality;

  NonCentralChiSq(double dof, double noncentrality);
};

// Drawn as 2 * Gamma(dof/2 + K, 1) with K ~ Poisson(noncentrality / 2),
// which is exact for every dof > 0.
double sample_noncentral_chisq(RngStream& rng, const NonCentralChiSq& dist);

// Gamma(shape, rate). Shapes below one are boosted: Gamma(shape + 1) * U^(1/shape).
// Results that underflow are clamped to the smallest normal double.
double sample_gamma(RngStream& rng, double shape, double rate = 1.0);

// log of a Gamma(shape, 1) draw; stays finite for shapes where the draw
// itself would underflow.
double sample_log_gamma(RngStream& rng, double shape);

// Normalized independent Gamma(alpha_j, 1) draws, normalized in log space.
SimplexVector sample_dirichlet(RngStream& rng, const Eigen::Ref<const Eigen::VectorXd>& alpha);

// Ratio of two gammas; result is kept strictly inside (0, 1).
double sample_beta(RngStream& rng, double a, double b);

std::size_t sample_categorical(RngStream& rng, const Eigen::Ref<const Eigen::VectorXd>& weights);

double cdf_beta(double x, double a, double b);
double cdf_gamma(double x, double shape, double rate = 1.0);

}  // namespace scir
