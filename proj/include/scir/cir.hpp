#pragma once

// Cox-Ingersoll-Ross diffusion d theta = (a - theta) dt + sqrt(2 theta) dW,
// whose stationary law is Gamma(a, 1). Transitions are sampled exactly from
// the scaled non-central chi-squared law; the stochastic variant replaces a
// by a minibatch estimate at each step.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scir/errors.hpp"
#include "scir/rng.hpp"

namespace scir {

struct CIRChainState {
  double theta = 1.0;
  std::uint64_t step = 0;
  double stepsize = 1.0;
};

// a_hat = prior + (N / n) * minibatch count.
class ShapeEstimate {
 public:
  ShapeEstimate(double prior_part, double count_part);

  double prior_part() const { return prior_part_; }
  double count_part() const { return count_part_; }
  double total() const { return prior_part_ + count_part_; }

 private:
  double prior_part_;
  double count_part_;
};

// Exact CIR step of length h from state.theta with stationary shape a.
CIRChainState cir_transition(RngStream& rng, const CIRChainState& state, double a, double h);

// cir_transition with a replaced by ahat.total().
CIRChainState scir_step(RngStream& rng, const CIRChainState& state, const ShapeEstimate& ahat, double h);

// Closed-form behaviour of exact and stochastic CIR chains after M steps of
// size h started at theta0. Templated so the identities can be checked in
// extended precision.
template <typename Scalar = double>
struct TheoryParams {
  Scalar a;
  Scalar theta0;
  Scalar h;
  std::size_t M;
  Scalar var_ahat = Scalar(0);

  void validate() const {
    if (!(a > 0) || !(theta0 >= 0) || !(h > 0) || M == 0 || !(var_ahat >= 0)) {
      throw ParameterError("TheoryParams: a, h must be positive, theta0 >= 0, M >= 1, var_ahat >= 0");
    }
  }
};

namespace detail {

template <typename Scalar>
Scalar one_minus_exp_neg(Scalar x) {
  using std::expm1;
  return -expm1(-x);
}

template <typename Scalar>
Scalar checked_denominator(Scalar value, const char* where) {
  if (!(value > 0)) throw DomainError(std::string(where) + ": argument outside the MGF domain");
  return value;
}

}  // namespace detail

// M_{theta_M}(s) = [1 - s(1 - e^{-Mh})]^{-a} exp[theta0 s e^{-Mh} / (1 - s(1 - e^{-Mh}))]
template <typename Scalar>
Scalar mgf_cir(const TheoryParams<Scalar>& tp, Scalar s) {
  using std::exp;
  using std::pow;
  tp.validate();
  const Scalar t = tp.h * static_cast<Scalar>(tp.M);
  const Scalar denom = detail::checked_denominator<Scalar>(Scalar(1) - s * detail::one_minus_exp_neg(t), "mgf_cir");
  return pow(denom, -tp.a) * exp(tp.theta0 * s * exp(-t) / denom);
}

// MGF of the stochastic chain conditional on the shapes it used, given in
// the order the steps were taken. The shape of the final step pairs with the
// m = 1 factor, the first step's with m = M.
template <typename Scalar>
Scalar mgf_scir(const TheoryParams<Scalar>& tp, Scalar s, std::span<const Scalar> ahat_sequence) {
  using std::log;
  using std::exp;
  if (ahat_sequence.size() != tp.M) throw ParameterError("mgf_scir: ahat sequence length must equal M");
  const Scalar base = mgf_cir(tp, s);
  Scalar log_correction = 0;
  Scalar previous = Scalar(1);  // m = 0 factor: 1 - s(1 - e^0)
  for (std::size_t m = 1; m <= tp.M; ++m) {
    const Scalar current = detail::checked_denominator<Scalar>(
        Scalar(1) - s * detail::one_minus_exp_neg(tp.h * static_cast<Scalar>(m)), "mgf_scir");
    log_correction -= (ahat_sequence[tp.M - m] - tp.a) * (log(current) - log(previous));
    previous = current;
  }
  return base * exp(log_correction);
}

template <typename Scalar>
Scalar mgf_scir(const TheoryParams<Scalar>& tp, Scalar s, std::span<const ShapeEstimate> ahat_sequence) {
  std::vector<Scalar> totals;
  totals.reserve(ahat_sequence.size());
  for (const auto& e : ahat_sequence) totals.push_back(static_cast<Scalar>(e.total()));
  return mgf_scir(tp, s, std::span<const Scalar>(totals));
}

// E[theta_hat_M] = theta0 e^{-Mh} + a (1 - e^{-Mh}); identical for the exact chain.
template <typename Scalar>
Scalar scir_mean(const TheoryParams<Scalar>& tp) {
  using std::exp;
  tp.validate();
  const Scalar decay = exp(-tp.h * static_cast<Scalar>(tp.M));
  return tp.theta0 * decay + tp.a * (Scalar(1) - decay);
}

template <typename Scalar>
Scalar cir_variance(const TheoryParams<Scalar>& tp) {
  using std::exp;
  tp.validate();
  const Scalar decay = exp(-tp.h * static_cast<Scalar>(tp.M));
  const Scalar spread = Scalar(1) - decay;
  return Scalar(2) * tp.theta0 * (decay - decay * decay) + tp.a * spread * spread;
}

// Exact-chain variance plus (1 - e^{-2Mh}) (1 - e^{-h}) / (1 + e^{-h}) Var[a_hat].
template <typename Scalar>
Scalar scir_variance(const TheoryParams<Scalar>& tp) {
  using std::exp;
  using std::tanh;
  const Scalar horizon = detail::one_minus_exp_neg(Scalar(2) * tp.h * static_cast<Scalar>(tp.M));
  // (1 - e^{-h}) / (1 + e^{-h}) = tanh(h / 2)
  return cir_variance(tp) + horizon * tanh(tp.h / Scalar(2)) * tp.var_ahat;
}

// One application of r(s) = s e^{-h} / (1 - s(1 - e^{-h})).
template <typename Scalar>
Scalar r_map(Scalar s, Scalar h) {
  using std::exp;
  const Scalar denom = Scalar(1) - s * detail::one_minus_exp_neg(h);
  if (denom == Scalar(0)) throw DomainError("r_map: pole");
  return s * exp(-h) / denom;
}

// n-fold composition of r_map in closed form.
template <typename Scalar>
Scalar r_composed(Scalar s, Scalar h, std::size_t n) {
  return r_map(s, h * static_cast<Scalar>(n));
}

// prod_{i=0}^{n-1} [1 - r^{(i)}(s) (1 - e^{-h})] with r^{(0)}(s) = s, evaluated
// by iterating r_map.
template <typename Scalar>
Scalar lemma2_product(Scalar s, Scalar h, std::size_t n) {
  const Scalar step = detail::one_minus_exp_neg(h);
  Scalar product = 1;
  Scalar r = s;
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar factor = Scalar(1) - r * step;
    if (factor == Scalar(0)) throw DomainError("lemma2_product: pole");
    product *= factor;
    if (i + 1 < n) r = r_map(r, h);
  }
  return product;
}

// U = 2 sqrt(theta) maps the CIR diffusion onto a Langevin diffusion whose
// stationary density is proportional to u^{2a-1} exp(-u^2 / 4).
inline double transform_to_generalized_gamma(double theta) {
  if (!(theta > 0.0)) throw ParameterError("transform_to_generalized_gamma: theta must be positive");
  return 2.0 * std::sqrt(theta);
}

inline double transform_from_generalized_gamma(double u) { return 0.25 * u * u; }

// CDF of the generalized gamma law of U, via P(U <= u) = P(theta <= u^2 / 4).
double generalized_gamma_cdf(double u, double a);

}  // namespace scir
