#pragma once

#include <Eigen/Dense>

namespace scir {

// Nonnegative weights summing to one. Construction validates and
// renormalizes away rounding; the raw vector is only reachable read-only.
class SimplexVector {
 public:
  static constexpr double kSumTolerance = 1e-10;

  SimplexVector() = default;
  // Throws ParameterError if any entry is negative or non-finite, or the
  // sum is not within kSumTolerance of one.
  explicit SimplexVector(Eigen::VectorXd weights);

  // Normalizes an arbitrary nonnegative vector with positive sum.
  static SimplexVector normalize(const Eigen::Ref<const Eigen::VectorXd>& positive);
  // Normalizes exp(log_weights) without overflow or total underflow.
  static SimplexVector from_log(const Eigen::Ref<const Eigen::VectorXd>& log_weights);

  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Index size() const { return weights_.size(); }
  double operator[](Eigen::Index j) const { return weights_[j]; }

 private:
  struct Trusted {};
  SimplexVector(Eigen::VectorXd weights, Trusted) : weights_(std::move(weights)) {}

  Eigen::VectorXd weights_;
};

}  // namespace scir
