#include "scir/simplex_vector.hpp"

#include <cmath>
#include <sstream>

#include "scir/errors.hpp"

namespace scir {

SimplexVector::SimplexVector(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) throw ParameterError("SimplexVector: empty");
  if (!weights_.allFinite() || (weights_.array() < 0.0).any()) {
    throw ParameterError("SimplexVector: entries must be finite and nonnegative");
  }
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg << "SimplexVector: weights sum to " << total;
    throw ParameterError(msg.str());
  }
}

SimplexVector SimplexVector::normalize(const Eigen::Ref<const Eigen::VectorXd>& positive) {
  if (positive.size() == 0) throw ParameterError("SimplexVector::normalize: empty");
  if (!positive.allFinite() || (positive.array() < 0.0).any()) {
    throw ParameterError("SimplexVector::normalize: entries must be finite and nonnegative");
  }
  const double total = positive.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ParameterError("SimplexVector::normalize: sum must be positive and finite");
  }
  return SimplexVector(positive / total, Trusted{});
}

SimplexVector SimplexVector::from_log(const Eigen::Ref<const Eigen::VectorXd>& log_weights) {
  if (log_weights.size() == 0) throw ParameterError("SimplexVector::from_log: empty");
  if (log_weights.array().isNaN().any()) throw ParameterError("SimplexVector::from_log: NaN entry");
  const double top = log_weights.maxCoeff();
  if (!std::isfinite(top)) throw ParameterError("SimplexVector::from_log: no finite entry");
  const Eigen::VectorXd w = (log_weights.array() - top).exp().matrix();
  return SimplexVector(w / w.sum(), Trusted{});
}

}  // namespace scir
