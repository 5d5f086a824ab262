#include "scir/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "scir/distributions.hpp"
#include "scir/errors.hpp"

namespace scir {

RosenblattResult rosenblatt_transform(const Eigen::Ref<const Eigen::VectorXd>& sample,
                                      const Eigen::Ref<const Eigen::VectorXd>& alpha) {
  const Eigen::Index d = sample.size();
  if (d < 2 || alpha.size() != d) throw ParameterError("rosenblatt_transform: need matching dimensions d >= 2");
  RosenblattResult result;
  result.uniforms.resize(d - 1);
  // Residual mass is accumulated from the tail so that sparse coordinates
  // do not vanish in 1 - sum_{j<k} x_j cancellation.
  Eigen::VectorXd tail_mass(d);
  Eigen::VectorXd tail_alpha(d);
  tail_mass[d - 1] = sample[d - 1];
  tail_alpha[d - 1] = alpha[d - 1];
  for (Eigen::Index k = d - 2; k >= 0; --k) {
    tail_mass[k] = tail_mass[k + 1] + sample[k];
    tail_alpha[k] = tail_alpha[k + 1] + alpha[k];
  }
  for (Eigen::Index k = 0; k < d - 1; ++k) {
    double y;
    if (tail_mass[k] > 0.0) {
      y = std::clamp(sample[k] / tail_mass[k], 0.0, 1.0);
    } else {
      y = 1.0;
      ++result.flags;
    }
    result.uniforms[k] = cdf_beta(y, alpha[k], tail_alpha[k + 1]);
  }
  return result;
}

double ks_uniform(std::vector<double> values) {
  if (values.empty()) throw ParameterError("ks_uniform: empty input");
  std::sort(values.begin(), values.end());
  const double m = static_cast<double>(values.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("ks_uniform: values must lie in [0, 1]");
    const double above = static_cast<double>(i + 1) / m - v;
    const double below = v - static_cast<double>(i) / m;
    sup = std::max({sup, above, below});
  }
  return sup;
}

KSReport dirichlet_ks_distance(const Eigen::Ref<const SampleMatrix>& samples,
                               const Eigen::Ref<const Eigen::VectorXd>& alpha) {
  if (samples.rows() == 0) throw ParameterError("dirichlet_ks_distance: no samples");
  if (samples.cols() != alpha.size()) throw ParameterError("dirichlet_ks_distance: dimension mismatch");
  const Eigen::Index free_dims = alpha.size() - 1;
  Eigen::MatrixXd transformed(samples.rows(), free_dims);
  KSReport report;
  for (Eigen::Index m = 0; m < samples.rows(); ++m) {
    auto row = rosenblatt_transform(samples.row(m).transpose(), alpha);
    transformed.row(m) = row.uniforms.transpose();
    report.flags += row.flags;
  }
  report.per_dim.resize(free_dims);
  for (Eigen::Index k = 0; k < free_dims; ++k) {
    const auto column = transformed.col(k);
    if (column.maxCoeff() == column.minCoeff()) report.degenerate = true;
    report.per_dim[k] = ks_uniform(std::vector<double>(column.begin(), column.end()));
  }
  report.d_ks = report.per_dim.mean();
  report.samples = static_cast<std::size_t>(samples.rows());
  report.dim = static_cast<std::size_t>(alpha.size());
  return report;
}

std::string ks_report_csv_header() { return "seed,method,minibatch_fraction,d_ks,per_dim_max,flags"; }

std::string ks_report_csv_row(const KSReport& report, std::uint64_t seed, const std::string& method,
                              double minibatch_fraction) {
  std::ostringstream row;
  row << std::setprecision(10) << seed << ',' << method << ',' << minibatch_fraction << ',' << report.d_ks << ','
      << report.per_dim_max() << ',' << report.flags;
  return row.str();
}

HeldoutDocument split_for_completion(const Document& doc) {
  HeldoutDocument out;
  const auto tokens = doc.tokens();
  for (std::size_t i = 0; i < tokens.size(); ++i) (i % 2 == 0 ? out.estimation : out.evaluation).push_back(tokens[i]);
  return out;
}

std::vector<HeldoutDocument> split_for_completion(const Corpus& corpus) {
  std::vector<HeldoutDocument> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus.docs()) out.push_back(split_for_completion(doc));
  return out;
}

double perplexity(std::span<const HeldoutDocument> heldout, const PredictiveFn& predictive) {
  if (heldout.empty()) throw ParameterError("perplexity: empty held-out set");
  double log_sum = 0.0;
  std::uint64_t tokens = 0;
  for (std::size_t doc = 0; doc < heldout.size(); ++doc) {
    for (auto word : heldout[doc].evaluation) {
      const double p = predictive(doc, word);
      if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
      log_sum += std::log(p);
      ++tokens;
    }
  }
  if (tokens == 0) throw ParameterError("perplexity: held-out set has no evaluation tokens");
  return std::exp(-log_sum / static_cast<double>(tokens));
}

double log_multinomial(const Document& counts, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  double out = std::lgamma(static_cast<double>(counts.length()) + 1.0);
  for (const auto& [category, count] : counts.counts) {
    if (category >= theta.size()) throw ParameterError("log_multinomial: category out of range");
    const double c = static_cast<double>(count);
    out += c * std::log(theta[category]) - std::lgamma(c + 1.0);
  }
  return out;
}

double log_predictive(const Corpus& heldout, std::span<const MixtureSample> samples) {
  if (samples.empty()) throw ParameterError("log_predictive: empty posterior sample set");
  if (heldout.size() == 0) throw ParameterError("log_predictive: empty held-out set");
  double total = 0.0;
  for (const auto& sample : samples) {
    if (sample.components.rows() != sample.weights.size()) throw ParameterError("log_predictive: sample shape mismatch");
    const Eigen::ArrayXd log_w = sample.weights.array().log();
    double per_sample = 0.0;
    Eigen::ArrayXd terms(sample.weights.size());
    for (const auto& item : heldout.docs()) {
      for (Eigen::Index j = 0; j < terms.size(); ++j) {
        terms[j] = log_w[j] + log_multinomial(item, sample.components.row(j).transpose());
      }
      const double top = terms.maxCoeff();
      per_sample += std::isfinite(top) ? top + std::log((terms - top).exp().sum()) : top;
    }
    total += per_sample / static_cast<double>(heldout.size());
  }
  return total / static_cast<double>(samples.size());
}

}  // namespace scir
