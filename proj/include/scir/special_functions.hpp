#pragma once

namespace scir::special {

// Relative accuracy targeted by the continued fractions and series below.
inline constexpr double kCdfTolerance = 1e-13;

// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
double gamma_p(double a, double x);
// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);
// Regularized incomplete beta I_x(a, b) for a, b > 0, x in [0, 1].
double beta_inc(double x, double a, double b);
// log B(a, b)
double log_beta(double a, double b);

}  // namespace scir::special
