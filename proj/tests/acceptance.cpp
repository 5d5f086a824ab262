// Acceptance suite. `acceptance --criterion N` runs one criterion and exits
// nonzero if it fails; without arguments every criterion runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scir/distributions.hpp"
#include "scir/evaluation.hpp"
#include "scir/harness/experiments.hpp"
#include "scir/simplex.hpp"

using namespace scir;
using namespace scir::harness;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

const TheoryResult& theory() {
  static std::optional<TheoryResult> result;
  if (!result) result = run_theory_checks(ExperimentConfig{});
  return *result;
}

Outcome theory_group(const std::vector<std::string>& names, double max_seconds_each) {
  std::size_t total = 0, failed = 0;
  double worst = 0, slowest = 0;
  for (const auto& name : names) {
    for (const auto& c : theory().named(name)) {
      ++total;
      if (!c.pass()) ++failed;
      const double z = c.standard_error > 0 ? std::abs(c.observed - c.expected) / c.standard_error
                                            : std::abs(c.observed - c.expected);
      worst = std::max(worst, z);
      slowest = std::max(slowest, c.seconds);
    }
  }
  const bool fast = slowest < max_seconds_each;
  return {total > 0 && failed == 0 && fast,
          fmt("%zu/%zu checks within bound, worst deviation %.3g, slowest %.2fs", total - failed, total, worst,
              slowest)};
}

Outcome criterion_mean() { return theory_group({"mean"}, 60.0); }
Outcome criterion_variance() { return theory_group({"variance"}, 60.0); }
Outcome criterion_mgf() { return theory_group({"mgf"}, 60.0); }
Outcome criterion_identities() { return theory_group({"composition", "product"}, 60.0); }

Outcome criterion_stationary() {
  const auto c = theory().named("stationary").at(0);
  return {c.pass(), fmt("KS distance %.5f (bound 0.01)", c.observed)};
}

// Long-run mean of `chains` independent full-batch chains targeting Gamma(a, 1).
struct LongRun {
  double error;
  double standard_error;
};

LongRun long_run_mean(Dynamics dynamics, double h, std::uint64_t stream) {
  const double a = 0.1, burn_time = 20.0, run_time = 200.0;
  const std::size_t chains = 2000;
  const auto burn = static_cast<std::size_t>(std::lround(burn_time / h));
  const auto steps = static_cast<std::size_t>(std::lround(run_time / h));
  RngStream rng(11, stream);
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(chains), a);
  const Eigen::VectorXd shape = Eigen::VectorXd::Constant(theta.size(), a);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(theta.size());
  for (std::size_t t = 0; t < burn + steps; ++t) {
    advance(dynamics, rng, theta, shape, h);
    if (t >= burn) sum += theta;
  }
  const Eigen::VectorXd means = sum / static_cast<double>(steps);
  const double grand = means.mean();
  const double sd = std::sqrt((means.array() - grand).square().sum() / static_cast<double>(chains - 1));
  return {grand - a, sd / std::sqrt(static_cast<double>(chains))};
}

Outcome criterion_bias() {
  const std::vector<double> hs{0.2, 0.1, 0.05};
  std::vector<LongRun> sgrld, scir;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    sgrld.push_back(long_run_mean(Dynamics::sgrld, hs[i], 10 + i));
    scir.push_back(long_run_mean(Dynamics::scir, hs[i], 20 + i));
  }
  bool pass = true;
  std::string detail = "SGRLD error";
  for (const auto& r : sgrld) detail += fmt(" %.4g", r.error);
  detail += ", ratios";
  for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
    const double ratio = std::abs(sgrld[i].error) / std::abs(sgrld[i + 1].error);
    detail += fmt(" %.3f", ratio);
    pass = pass && ratio >= 1.5 && ratio <= 2.8;
  }
  detail += " (want [1.5, 2.8]); SCIR |error|/SE";
  for (const auto& r : scir) {
    const double z = std::abs(r.error) / r.standard_error;
    detail += fmt(" %.2f", z);
    pass = pass && z < 4.0;
  }
  return {pass, detail};
}

ExperimentConfig synthetic_config(const std::string& posterior) {
  ExperimentConfig c;
  c.synthetic.posteriors = {posterior};
  return c;
}

Outcome criterion_sparse() {
  const auto start = Clock::now();
  const auto config = synthetic_config("sparse");
  const auto result = run_synthetic(config);
  const double seconds = seconds_since(start);
  std::size_t wins = 0, cells = 0, close = 0;
  double worst_ratio = 0;
  for (auto seed : config.seeds) {
    for (double f : config.synthetic.fractions) {
      ++cells;
      const double s = result.find_best("sparse", SyntheticMethod::scir, seed, f).report.d_ks;
      const double g = result.find_best("sparse", SyntheticMethod::sgrld, seed, f).report.d_ks;
      if (s < g) ++wins;
    }
    const double s = result.find_best("sparse", SyntheticMethod::scir, seed, 0.5).report.d_ks;
    const double e = result.find_best("sparse", SyntheticMethod::exact, seed, 0.5).report.d_ks;
    worst_ratio = std::max(worst_ratio, s / e);
    if (s < 2 * e) ++close;
  }
  const bool pass = wins == cells && close == config.seeds.size() && seconds < 300;
  return {pass, fmt("SCIR < SGRLD in %zu/%zu cells, SCIR(0.5) < 2x exact on %zu/%zu seeds (worst %.2fx), %.1fs", wins,
                    cells, close, config.seeds.size(), worst_ratio, seconds)};
}

Outcome criterion_dense() {
  const auto config = synthetic_config("dense");
  const auto result = run_synthetic(config);
  bool pass = true;
  std::string detail = "seed-mean d_KS SCIR/SGRLD";
  for (double f : config.synthetic.fractions) {
    if (f < 0.1) continue;
    double s = 0, g = 0;
    for (auto seed : config.seeds) {
      s += result.find_best("dense", SyntheticMethod::scir, seed, f).report.d_ks;
      g += result.find_best("dense", SyntheticMethod::sgrld, seed, f).report.d_ks;
    }
    const double ratio = std::max(s, g) / std::min(s, g);
    detail += fmt(" at %g: %.4f/%.4f (%.2fx)", f, s / config.seeds.size(), g / config.seeds.size(), ratio);
    pass = pass && ratio <= 1.5;
  }
  return {pass, detail + " (want <= 1.5x)"};
}

Outcome criterion_lda() {
  const auto start = Clock::now();
  const ExperimentConfig config;
  const auto in = load_lda_inputs(config);
  const auto result = run_lda(config, in.train, in.heldout, &*in.truth);
  const double seconds = seconds_since(start);
  std::size_t wins = 0;
  bool within = true;
  double worst = 0;
  for (auto seed : config.seeds) {
    const double s = result.find(Dynamics::scir, seed).final_perplexity();
    const double g = result.find(Dynamics::sgrld, seed).final_perplexity();
    if (s <= g) ++wins;
    for (double p : {s, g}) {
      const double ratio = std::max(p, result.true_perplexity) / std::min(p, result.true_perplexity);
      worst = std::max(worst, ratio);
      within = within && ratio <= 1.5;
    }
  }
  const bool pass = wins >= 4 && within && seconds < 600;
  return {pass, fmt("SCIR <= SGRLD on %zu/%zu seeds, worst ratio to true perplexity %.3f (%.3f), %.1fs", wins,
                    config.seeds.size(), worst, result.true_perplexity, seconds)};
}

Outcome criterion_dp() {
  const ExperimentConfig config;
  const auto in = load_mixture_inputs(config);
  const auto result = run_dpmix(config, in.train, in.heldout, &*in.truth);
  std::size_t recovered = 0, wins = 0;
  double active_scir = 0, active_sgrld = 0;
  for (auto seed : config.seeds) {
    if (result.find("gibbs", seed).modal_active_clusters() == config.generate.clusters) ++recovered;
    const auto& s = result.find("scir", seed);
    const auto& g = result.find("sgrld", seed);
    if (s.converged_log_predictive() > g.converged_log_predictive()) ++wins;
    active_scir += s.mean_active_clusters() / static_cast<double>(config.seeds.size());
    active_sgrld += g.mean_active_clusters() / static_cast<double>(config.seeds.size());
  }
  const std::size_t n = config.seeds.size();
  const bool pass = recovered == n && wins >= 4 && active_sgrld > active_scir;
  return {pass, fmt("Gibbs mode = %zu clusters on %zu/%zu seeds, SCIR > SGRLD log predictive on %zu/%zu, "
                    "mean active clusters SGRLD %.2f vs SCIR %.2f",
                    config.generate.clusters, recovered, n, wins, n, active_sgrld, active_scir)};
}

// ---- distribution kernels ------------------------------------------------

struct Moments {
  double mean, var, mean_se, var_se;
};

Moments moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return {mean, m2 * n / (n - 1), std::sqrt(m2 / n), std::sqrt(std::max(m4 - m2 * m2, 0.0) / n)};
}

double ks_against(std::vector<double> x, const std::function<double(double)>& cdf) {
  for (auto& v : x) v = cdf(v);
  return ks_uniform(std::move(x));
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

Outcome criterion_kernels() {
  const auto start = Clock::now();
  RngStream rng(2024, 11);
  const std::size_t n = 100000;
  std::vector<std::string> failures;
  std::size_t checks = 0;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  };
  std::vector<double> x(n), y(n);

  for (int pair = 0; pair < 20; ++pair) {
    const double nu = 0.1 + 10 * rng.uniform(), mu = 20 * rng.uniform();
    const NonCentralChiSq d(nu, mu);
    for (auto& v : x) v = sample_noncentral_chisq(rng, d);
    const auto m = moments(x);
    expect(std::abs(m.mean - (nu + mu)) < 5 * m.mean_se, fmt("chi2 mean (%.3g, %.3g)", nu, mu));
    expect(std::abs(m.var - 2 * (nu + 2 * mu)) < 5 * m.var_se, fmt("chi2 variance (%.3g, %.3g)", nu, mu));
    expect(*std::min_element(x.begin(), x.end()) > 0, "chi2 positivity");
  }

  for (double shape : {0.1, 0.5, 1.0, 3.7, 800.1}) {
    for (auto& v : x) v = sample_gamma(rng, shape, 2.0);
    const auto m = moments(x);
    expect(std::abs(m.mean - shape / 2) < 5 * m.mean_se, fmt("gamma mean %.3g", shape));
    expect(std::abs(m.var - shape / 4) < 5 * m.var_se, fmt("gamma variance %.3g", shape));
    expect(ks_against(x, [&](double v) { return cdf_gamma(v, shape, 2.0); }) < 0.01, fmt("gamma KS %.3g", shape));
  }
  for (auto [a1, a2] : {std::pair{0.1, 0.3}, std::pair{0.7, 2.5}, std::pair{2.0, 5.0}}) {
    for (auto& v : x) v = sample_gamma(rng, a1) + sample_gamma(rng, a2);
    expect(ks_against(x, [&](double v) { return cdf_gamma(v, a1 + a2); }) < 0.01, fmt("gamma additivity %.3g", a1));
  }

  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{1.0, 5.0}, std::pair{2.0, 2.0}, std::pair{0.1, 0.4}}) {
    for (auto& v : x) v = sample_beta(rng, a, b);
    const auto m = moments(x);
    const double mean = a / (a + b), var = a * b / ((a + b) * (a + b) * (a + b + 1));
    expect(std::abs(m.mean - mean) < 5 * m.mean_se, fmt("beta mean (%.3g, %.3g)", a, b));
    expect(std::abs(m.var - var) < 5 * m.var_se, fmt("beta variance (%.3g, %.3g)", a, b));
    expect(ks_against(x, [&](double v) { return cdf_beta(v, a, b); }) < 0.01, fmt("beta KS (%.3g, %.3g)", a, b));
  }

  Eigen::VectorXd alpha(4);
  alpha << 0.1, 1.0, 2.5, 800.1;
  std::vector<std::vector<double>> direct(4, std::vector<double>(n)), via_gamma(4, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const Eigen::VectorXd w = sample_dirichlet(rng, alpha).weights();
    Eigen::VectorXd g(4);
    for (int k = 0; k < 4; ++k) g[k] = sample_gamma(rng, alpha[k]);
    g /= g.sum();
    for (int k = 0; k < 4; ++k) {
      direct[k][r] = w[k];
      via_gamma[k][r] = g[k];
    }
  }
  for (int k = 0; k < 4; ++k) {
    const auto m = moments(direct[k]);
    const double mean = alpha[k] / alpha.sum();
    expect(std::abs(m.mean - mean) < 5 * m.mean_se, fmt("dirichlet mean %d", k));
    expect(ks_two_sample(direct[k], via_gamma[k]) < 0.01, fmt("dirichlet vs normalized gamma %d", k));
    const double rest = alpha.sum() - alpha[k];
    expect(ks_against(direct[k], [&](double v) { return cdf_beta(v, alpha[k], rest); }) < 0.01,
           fmt("dirichlet marginal KS %d", k));
  }

  const double seconds = seconds_since(start);
  std::string detail = fmt("%zu/%zu checks passed, %.1fs", checks - failures.size(), checks, seconds);
  for (const auto& f : failures) detail += "; failed " + f;
  return {failures.empty() && seconds < 120, detail};
}

const std::map<int, std::function<Outcome()>>& criteria() {
  static const std::map<int, std::function<Outcome()>> table{
      {1, criterion_mean},   {2, criterion_variance}, {3, criterion_mgf},   {4, criterion_identities},
      {5, criterion_stationary}, {6, criterion_bias}, {7, criterion_sparse}, {8, criterion_dense},
      {9, criterion_lda},    {10, criterion_dp},      {11, criterion_kernels}};
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty())
    for (const auto& [k, fn] : criteria()) selected.push_back(k);

  int failed = 0;
  for (int k : selected) {
    const auto it = criteria().find(k);
    if (it == criteria().end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    Outcome outcome{false, ""};
    try {
      outcome = it->second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", k, outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
