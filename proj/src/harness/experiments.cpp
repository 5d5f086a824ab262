#include "scir/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "scir/cir.hpp"
#include "scir/distributions.hpp"
#include "scir/dp_mixture.hpp"
#include "scir/errors.hpp"
#include "scir/lda.hpp"

namespace scir::harness {

void parallel_cells(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::quiet_NaN()
                   : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

RunRecord record(std::string experiment, std::string method, std::uint64_t seed, double h, double fraction,
                 std::uint64_t iteration, std::string metric, double value) {
  return RunRecord{std::move(experiment), std::move(method), seed,  h, fraction, iteration,
                   std::move(metric),     value};
}

}  // namespace

LdaDataset generate_lda_dataset(const GenerateConfig& gen) {
  RngStream rng(gen.seed, 1);
  return generate_synthetic_corpus(rng, gen.topics, gen.vocab, gen.docs, gen.doc_length, gen.topic_sparsity,
                                   gen.doc_concentration, gen.heldout_docs);
}

MixtureDataset generate_mixture_dataset(const GenerateConfig& gen) {
  RngStream rng(gen.seed, 2);
  return generate_mixture_data(rng, gen.clusters, gen.users, gen.dim, gen.observations, gen.cluster_sparsity,
                               gen.heldout_users);
}

LdaInputs load_lda_inputs(const ExperimentConfig& config) {
  const auto& lc = config.lda;
  if (lc.corpus.empty()) {
    auto data = generate_lda_dataset(config.generate);
    return {std::move(data.train), std::move(data.heldout), std::move(data.truth)};
  }
  if (lc.heldout_corpus.empty()) throw ParameterError("lda.corpus is set but lda.heldout_corpus is not");
  LdaInputs in{Corpus::read_file(lc.corpus), Corpus::read_file(lc.heldout_corpus), std::nullopt};
  if (!lc.truth.empty()) in.truth = read_lda_truth(lc.truth);
  return in;
}

MixtureInputs load_mixture_inputs(const ExperimentConfig& config) {
  const auto& dc = config.dp;
  if (dc.data.empty()) {
    auto data = generate_mixture_dataset(config.generate);
    return {std::move(data.train), std::move(data.heldout), std::move(data.truth)};
  }
  if (dc.heldout_data.empty()) throw ParameterError("dp.data is set but dp.heldout_data is not");
  MixtureInputs in{Corpus::read_file(dc.data), Corpus::read_file(dc.heldout_data), std::nullopt};
  if (!dc.truth.empty()) in.truth = read_mixture_truth(dc.truth);
  return in;
}

// ---- synthetic ------------------------------------------------------------

std::vector<std::uint64_t> synthetic_counts(const std::string& posterior) {
  if (posterior == "sparse") return {800, 100, 100, 0, 0, 0, 0, 0, 0, 0};
  if (posterior == "dense") return {112, 119, 92, 98, 95, 96, 102, 92, 91, 103};
  throw ParameterError("unknown synthetic posterior '" + posterior + "'");
}

const char* to_string(SyntheticMethod method) {
  switch (method) {
    case SyntheticMethod::scir: return "scir";
    case SyntheticMethod::sgrld: return "sgrld";
    case SyntheticMethod::exact: return "exact";
  }
  return "?";
}

SampleMatrix run_simplex_sampler(SyntheticMethod method, RngStream& rng, const std::vector<std::uint64_t>& counts,
                                 double prior, double fraction, double h, std::size_t iterations,
                                 std::size_t burn_in, std::size_t thin) {
  if (iterations <= burn_in || thin == 0) throw ParameterError("run_simplex_sampler: need iterations > burn_in, thin > 0");
  const std::size_t d = counts.size();
  const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), prior);
  const std::size_t kept = (iterations - burn_in + thin - 1) / thin;
  SampleMatrix samples(kept, d);

  if (method == SyntheticMethod::exact) {
    const auto totals = SparseCounts::from_dense(counts, std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    for (std::size_t r = 0; r < kept; ++r)
      samples.row(r) = exact_dirichlet_posterior(rng, alpha, totals).weights().transpose();
    return samples;
  }

  const auto data = CategoricalData::from_totals(counts);
  const std::size_t N = data.size();
  const auto n = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(fraction * static_cast<double>(N))), 1, N);
  const Dynamics dynamics = method == SyntheticMethod::scir ? Dynamics::scir : Dynamics::sgrld;
  SimplexChain chain(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d)), alpha);
  std::size_t row = 0;
  for (std::size_t m = 0; m < iterations; ++m) {
    const auto batch = Minibatch::sample(rng, N, n);
    auto step = simplex_step(dynamics, rng, chain, batch, data, h);
    chain = std::move(step.chain);
    if (m >= burn_in && (m - burn_in) % thin == 0) samples.row(row++) = step.omega.weights().transpose();
  }
  return samples;
}

const SyntheticCell& SyntheticResult::find_best(const std::string& posterior, SyntheticMethod method,
                                                std::uint64_t seed, double fraction) const {
  for (const auto& c : best)
    if (c.posterior == posterior && c.method == method && c.seed == seed && c.fraction == fraction) return c;
  throw std::out_of_range("no synthetic cell for " + posterior + "/" + to_string(method));
}

std::vector<RunRecord> SyntheticResult::records() const {
  std::vector<RunRecord> out;
  const auto emit = [&](const SyntheticCell& c, bool chosen) {
    const std::string experiment = "synthetic_" + c.posterior;
    const std::string prefix = chosen ? "best_" : "";
    out.push_back(record(experiment, to_string(c.method), c.seed, c.h, c.fraction, 0, prefix + "d_ks", c.report.d_ks));
    if (!chosen) return;
    out.push_back(record(experiment, to_string(c.method), c.seed, c.h, c.fraction, 0, "best_per_dim_max",
                         c.report.per_dim_max()));
    out.push_back(record(experiment, to_string(c.method), c.seed, c.h, c.fraction, 0, "best_flags",
                         static_cast<double>(c.report.flags)));
    static const char* names[5] = {"omega5_min", "omega5_q25", "omega5_median", "omega5_q75", "omega5_max"};
    for (int q = 0; q < 5; ++q)
      out.push_back(record(experiment, to_string(c.method), c.seed, c.h, c.fraction, 0, names[q],
                           c.omega5_quantiles[q]));
  };
  for (const auto& c : cells) emit(c, false);
  for (const auto& c : best) emit(c, true);
  return out;
}

SyntheticResult run_synthetic(const ExperimentConfig& config) {
  config.validate();
  const auto& sc = config.synthetic;
  struct Key {
    std::size_t posterior, method, seed, fraction, h;
  };
  std::vector<Key> keys;
  const std::vector<SyntheticMethod> methods{SyntheticMethod::scir, SyntheticMethod::sgrld, SyntheticMethod::exact};
  for (std::size_t p = 0; p < sc.posteriors.size(); ++p)
    for (std::size_t m = 0; m < methods.size(); ++m)
      for (std::size_t s = 0; s < config.seeds.size(); ++s)
        for (std::size_t f = 0; f < sc.fractions.size(); ++f) {
          const std::size_t grid = methods[m] == SyntheticMethod::scir    ? sc.scir_grid.size()
                                   : methods[m] == SyntheticMethod::sgrld ? sc.sgrld_grid.size()
                                                                          : 1;
          for (std::size_t h = 0; h < grid; ++h) keys.push_back({p, m, s, f, h});
        }

  SyntheticResult result;
  result.cells.resize(keys.size());
  parallel_cells(keys.size(), config.threads, [&](std::size_t i) {
    const Key& k = keys[i];
    const auto method = methods[k.method];
    const double h = method == SyntheticMethod::scir    ? sc.scir_grid[k.h]
                     : method == SyntheticMethod::sgrld ? sc.sgrld_grid[k.h]
                                                        : 0.0;
    const std::uint64_t seed = config.seeds[k.seed];
    const std::uint64_t stream = ((k.posterior * 8 + k.method) * 1024 + k.fraction) * 1024 + k.h;
    RngStream rng(seed, stream);
    const auto counts = synthetic_counts(sc.posteriors[k.posterior]);
    const auto samples = run_simplex_sampler(method, rng, counts, sc.prior, sc.fractions[k.fraction], h,
                                             sc.iterations, sc.burn_in, sc.thin);
    Eigen::VectorXd alpha(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) alpha[j] = sc.prior + static_cast<double>(counts[j]);

    SyntheticCell cell{sc.posteriors[k.posterior], method, seed, sc.fractions[k.fraction], h,
                       dirichlet_ks_distance(samples, alpha), {}};
    if (samples.cols() >= 5) {
      std::vector<double> omega5(samples.rows());
      for (Eigen::Index r = 0; r < samples.rows(); ++r) omega5[r] = samples(r, 4);
      const double qs[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
      for (int q = 0; q < 5; ++q) cell.omega5_quantiles[q] = quantile(omega5, qs[q]);
    }
    result.cells[i] = std::move(cell);
  });

  // Cells are grouped contiguously by (posterior, method, seed, fraction).
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i, arg = i;
    while (j < keys.size() && keys[j].posterior == keys[i].posterior && keys[j].method == keys[i].method &&
           keys[j].seed == keys[i].seed && keys[j].fraction == keys[i].fraction) {
      if (result.cells[j].report.d_ks < result.cells[arg].report.d_ks) arg = j;
      ++j;
    }
    result.best.push_back(result.cells[arg]);
    i = j;
  }
  return result;
}

// ---- LDA ----------------------------------------------------------------

double LdaTrace::final_perplexity() const {
  if (evals.empty()) throw std::logic_error("LdaTrace has no evaluations");
  return evals.back().perplexity;
}

const LdaTrace& LdaResult::find(Dynamics method, std::uint64_t seed) const {
  for (const auto& t : traces)
    if (t.method == method && t.seed == seed) return t;
  throw std::out_of_range("no LDA trace for the requested method and seed");
}

std::vector<RunRecord> LdaResult::records() const {
  std::vector<RunRecord> out;
  for (const auto& t : traces)
    for (const auto& e : t.evals)
      out.push_back(record("lda", to_string(t.method), t.seed, 0.0, 0.0, e.iteration, "perplexity", e.perplexity));
  if (!std::isnan(true_perplexity)) out.push_back(record("lda", "truth", 0, 0.0, 0.0, 0, "perplexity", true_perplexity));
  out.push_back(record("lda", "unigram", 0, 0.0, 0.0, 0, "perplexity", unigram_perplexity));
  return out;
}

double unigram_perplexity(const Corpus& train, const Corpus& heldout) {
  if (train.vocab_size() != heldout.vocab_size()) throw ParameterError("unigram_perplexity: vocabulary mismatch");
  Eigen::VectorXd freq = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(train.vocab_size()), 0.5);
  for (const auto& doc : train.docs())
    for (const auto& [w, c] : doc.counts) freq[w] += c;
  freq /= freq.sum();
  const auto split = split_for_completion(heldout);
  return perplexity(split, [&](std::size_t, std::uint32_t w) { return freq[w]; });
}

LdaResult run_lda(const ExperimentConfig& config, const Corpus& train, const Corpus& heldout, const LdaTruth* truth) {
  config.validate();
  const auto& lc = config.lda;
  if (train.size() == 0) throw ParameterError("run_lda: empty training corpus");
  if (heldout.size() == 0) throw ParameterError("run_lda: empty held-out corpus");
  if (train.vocab_size() != heldout.vocab_size()) throw ParameterError("run_lda: vocabulary mismatch");
  if (truth && static_cast<std::size_t>(truth->phi.cols()) != train.vocab_size())
    throw ParameterError("run_lda: truth vocabulary mismatch");

  const auto split = split_for_completion(heldout);
  const std::size_t batch_size = std::min(lc.batch, train.size());
  const std::vector<Dynamics> methods{Dynamics::scir, Dynamics::sgrld};

  LdaResult result;
  result.traces.resize(config.seeds.size() * methods.size());
  parallel_cells(result.traces.size(), config.threads, [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i / methods.size()];
    const Dynamics method = methods[i % methods.size()];
    const LdaMethodConfig& mc = method == Dynamics::scir ? lc.scir : lc.sgrld;
    const LdaHyper hyper{lc.topics, mc.alpha, mc.beta};
    const StepsizeSchedule schedule{mc.h, mc.tau, mc.kappa};

    RngStream rng(seed, 100 + static_cast<std::uint64_t>(method));
    LdaState state = LdaState::initialize(rng, hyper, train.vocab_size());
    std::deque<Eigen::MatrixXd> window;
    LdaTrace trace{method, seed, {}};
    for (std::size_t m = 0; m < lc.iterations; ++m) {
      const auto batch = Minibatch::sample(rng, train.size(), batch_size);
      lda_step(method, rng, state, train, batch, schedule.at(m), lc.sweeps);
      window.push_back(state.phi());
      if (window.size() > lc.eval_window) window.pop_front();
      if ((m + 1) % lc.eval_every == 0 || m + 1 == lc.iterations) {
        // Shared evaluation stream per iteration, so methods see the same randomness.
        RngStream eval_rng(seed, (std::uint64_t{1} << 32) + m);
        const std::vector<Eigen::MatrixXd> phis(window.begin(), window.end());
        trace.evals.push_back({m + 1, lda_perplexity(eval_rng, split, phis, mc.alpha, lc.eval_sweeps)});
      }
    }
    result.traces[i] = std::move(trace);
  });

  result.true_perplexity = std::numeric_limits<double>::quiet_NaN();
  if (truth) {
    RngStream eval_rng(config.seeds.front(), std::uint64_t{1} << 40);
    const std::vector<Eigen::MatrixXd> phis{truth->phi};
    result.true_perplexity = lda_perplexity(eval_rng, split, phis, truth->doc_concentration, lc.eval_sweeps);
  }
  result.unigram_perplexity = unigram_perplexity(train, heldout);
  return result;
}

// ---- DP mixture -----------------------------------------------------------

double DpTrace::converged_log_predictive() const {
  std::vector<double> v;
  for (const auto& e : evals)
    if (e.iteration > burn_in) v.push_back(e.log_predictive);
  return mean_of(v);
}

double DpTrace::mean_active_clusters() const {
  std::vector<double> v;
  for (std::size_t m = burn_in; m < active.size(); ++m) v.push_back(static_cast<double>(active[m]));
  return mean_of(v);
}

std::size_t DpTrace::modal_active_clusters() const {
  std::map<std::size_t, std::size_t> tally;
  for (std::size_t m = burn_in; m < active.size(); ++m) ++tally[active[m]];
  if (tally.empty()) throw std::logic_error("DpTrace has no post-burn-in iterations");
  return std::max_element(tally.begin(), tally.end(), [](const auto& a, const auto& b) { return a.second < b.second; })
      ->first;
}

const DpTrace& DpResult::find(const std::string& method, std::uint64_t seed) const {
  for (const auto& t : traces)
    if (t.method == method && t.seed == seed) return t;
  throw std::out_of_range("no DP trace for " + method);
}

std::vector<RunRecord> DpResult::records() const {
  std::vector<RunRecord> out;
  for (const auto& t : traces) {
    for (const auto& e : t.evals) {
      out.push_back(record("dpmix", t.method, t.seed, 0.0, 0.0, e.iteration, "log_predictive", e.log_predictive));
      out.push_back(record("dpmix", t.method, t.seed, 0.0, 0.0, e.iteration, "active_clusters",
                           static_cast<double>(e.active_clusters)));
    }
    out.push_back(record("dpmix", t.method, t.seed, 0.0, 0.0, t.active.size(), "converged_log_predictive",
                         t.converged_log_predictive()));
    out.push_back(record("dpmix", t.method, t.seed, 0.0, 0.0, t.active.size(), "mean_active_clusters",
                         t.mean_active_clusters()));
    out.push_back(record("dpmix", t.method, t.seed, 0.0, 0.0, t.active.size(), "modal_active_clusters",
                         static_cast<double>(t.modal_active_clusters())));
  }
  if (!std::isnan(true_log_predictive))
    out.push_back(record("dpmix", "truth", 0, 0.0, 0.0, 0, "log_predictive", true_log_predictive));
  return out;
}

DpResult run_dpmix(const ExperimentConfig& config, const Corpus& train, const Corpus& heldout,
                   const MixtureTruth* truth) {
  config.validate();
  const auto& dc = config.dp;
  if (train.size() == 0) throw ParameterError("run_dpmix: empty training data");
  if (heldout.size() == 0) throw ParameterError("run_dpmix: empty held-out data");
  if (train.vocab_size() != heldout.vocab_size()) throw ParameterError("run_dpmix: dimension mismatch");

  const std::vector<std::string> methods{"scir", "sgrld", "gibbs"};
  const std::size_t batch_size = std::min(dc.batch, train.size());
  const double initial_alpha = dc.alpha_shape / dc.alpha_rate;

  DpResult result;
  result.traces.resize(config.seeds.size() * methods.size());
  parallel_cells(result.traces.size(), config.threads, [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i / methods.size()];
    const std::string& method = methods[i % methods.size()];
    RngStream rng(seed, 300 + i % methods.size());
    DpTrace trace{method, seed, {}, {}, 0};

    if (method == "gibbs") {
      const DPHyper hyper{dc.gibbs_base, dc.alpha_shape, dc.alpha_rate, true};
      DPState state = DPState::initialize(rng, train, hyper, dc.gibbs_init_components, initial_alpha);
      trace.burn_in = dc.gibbs_burn_in;
      for (std::size_t m = 0; m < dc.gibbs_sweeps; ++m) {
        dp_slice_gibbs_step(rng, state, train, hyper);
        trace.active.push_back(state.active_clusters());
        if ((m + 1) % dc.eval_every == 0 || m + 1 == dc.gibbs_sweeps) {
          const std::vector<MixtureSample> sample{state.snapshot()};
          trace.evals.push_back({m + 1, log_predictive(heldout, sample), state.active_clusters()});
        }
      }
    } else {
      const Dynamics dynamics = dynamics_from_string(method);
      const DpMethodConfig& mc = dynamics == Dynamics::scir ? dc.scir : dc.sgrld;
      const DPHyper hyper{mc.base, dc.alpha_shape, dc.alpha_rate, true};
      const DPStepsizes steps{mc.h_theta, mc.h_dp};
      DPState state = DPState::initialize(rng, train, hyper, mc.init_components, initial_alpha);
      trace.burn_in = dc.burn_in;
      for (std::size_t m = 0; m < dc.iterations; ++m) {
        const auto batch = Minibatch::sample(rng, train.size(), batch_size);
        dp_slice_stochastic_step(dynamics, rng, state, train, batch, hyper, steps);
        trace.active.push_back(state.active_clusters());
        if ((m + 1) % dc.eval_every == 0 || m + 1 == dc.iterations) {
          const std::vector<MixtureSample> sample{state.snapshot()};
          trace.evals.push_back({m + 1, log_predictive(heldout, sample), state.active_clusters()});
        }
      }
    }
    result.traces[i] = std::move(trace);
  });

  result.true_log_predictive = std::numeric_limits<double>::quiet_NaN();
  if (truth) {
    if (static_cast<std::size_t>(truth->components.cols()) != train.vocab_size())
      throw ParameterError("run_dpmix: truth dimension mismatch");
    const std::vector<MixtureSample> sample{MixtureSample{truth->weights, truth->components}};
    result.true_log_predictive = log_predictive(heldout, sample);
  }
  return result;
}

// ---- theory ---------------------------------------------------------------

bool TheoryCheck::pass() const { return std::abs(observed - expected) <= bound; }

std::vector<TheoryCheck> TheoryResult::named(const std::string& name) const {
  std::vector<TheoryCheck> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out), [&](const auto& c) { return c.name == name; });
  return out;
}

std::vector<RunRecord> TheoryResult::records() const {
  std::vector<RunRecord> out;
  for (const auto& c : checks) {
    out.push_back(record("theory", c.name, 0, 0.0, 0.0, c.index, "observed", c.observed));
    out.push_back(record("theory", c.name, 0, 0.0, 0.0, c.index, "expected", c.expected));
    out.push_back(record("theory", c.name, 0, 0.0, 0.0, c.index, "standard_error", c.standard_error));
    out.push_back(record("theory", c.name, 0, 0.0, 0.0, c.index, "bound", c.bound));
    out.push_back(record("theory", c.name, 0, 0.0, 0.0, c.index, "pass", c.pass() ? 1.0 : 0.0));
  }
  return out;
}

std::uint64_t sample_hypergeometric(RngStream& rng, std::uint64_t N, std::uint64_t successes, std::uint64_t n) {
  if (successes > N || n > N) throw ParameterError("sample_hypergeometric: successes and n must not exceed N");
  std::uint64_t drawn = 0;
  std::uint64_t remaining = N;
  std::uint64_t marked = successes;
  for (std::uint64_t t = 0; t < n && marked > 0; ++t, --remaining) {
    if (rng.below(remaining) < marked) {
      ++drawn;
      --marked;
    }
  }
  return drawn;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Mean, variance, and the standard errors of both from raw samples.
struct Moments {
  double mean, variance, mean_se, variance_se;
};

Moments moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = mean_of(x);
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

void moment_checks(const ExperimentConfig& config, TheoryResult& out) {
  const auto& tc = config.theory;
  std::vector<TheoryCheck> checks(2 * tc.settings);
  parallel_cells(tc.settings, config.threads, [&](std::size_t i) {
    const auto start = Clock::now();
    RngStream rng(tc.seed, 1000 + i);
    const double theta0 = 0.1 + 4.9 * rng.uniform();
    const double prior = 0.1 + 1.9 * rng.uniform();
    const std::uint64_t N = 20 + rng.below(81);
    const std::uint64_t total = rng.below(N + 1);
    const std::uint64_t n = 1 + rng.below(N);
    const double h = 0.05 + 0.95 * rng.uniform();
    const std::size_t M = 1 + rng.below(30);
    const TheoryParams<double> tp{prior + static_cast<double>(total), theta0, h, M,
                                  shape_estimate_variance(total, N, n)};

    std::vector<double> finals(tc.chains);
    for (auto& value : finals) {
      CIRChainState state{theta0, 0, h};
      for (std::size_t m = 0; m < M; ++m) {
        const auto x = sample_hypergeometric(rng, N, total, n);
        const ShapeEstimate ahat(prior, static_cast<double>(N) / static_cast<double>(n) * static_cast<double>(x));
        state = scir_step(rng, state, ahat, h);
      }
      value = state.theta;
    }
    const auto mo = moments(finals);
    const double elapsed = seconds_since(start);
    checks[2 * i] = {"mean", i, mo.mean, scir_mean(tp), mo.mean_se, 5 * mo.mean_se, elapsed};
    checks[2 * i + 1] = {"variance", i, mo.variance, scir_variance(tp), mo.variance_se, 5 * mo.variance_se, elapsed};
  });
  for (std::size_t i = 0; i < tc.settings; ++i) out.checks.push_back(checks[2 * i]);
  for (std::size_t i = 0; i < tc.settings; ++i) out.checks.push_back(checks[2 * i + 1]);
}

struct MgfCase {
  double a, theta0, h;
  std::vector<double> ahat;
};

void mgf_checks(const ExperimentConfig& config, TheoryResult& out) {
  const auto& tc = config.theory;
  const std::vector<MgfCase> cases{{2.0, 1.0, 0.5, {3.0, 1.0, 2.0}},
                                   {1.5, 0.5, 0.3, {0.5, 2.5, 1.0, 3.0, 0.5}},
                                   {4.0, 2.0, 1.0, {6.0, 2.0, 5.0, 3.0}}};
  const std::vector<double> s_values{-0.5, 0.2, 0.4};
  std::size_t index = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto start = Clock::now();
    const auto& mc = cases[c];
    RngStream rng(tc.seed, 2000 + c);
    std::vector<double> finals(tc.chains);
    for (auto& value : finals) {
      CIRChainState state{mc.theta0, 0, mc.h};
      for (double a : mc.ahat) state = cir_transition(rng, state, a, mc.h);
      value = state.theta;
    }
    const TheoryParams<double> tp{mc.a, mc.theta0, mc.h, mc.ahat.size(), 0.0};
    for (double s : s_values) {
      std::vector<double> e(finals.size());
      std::transform(finals.begin(), finals.end(), e.begin(), [s](double t) { return std::exp(s * t); });
      const auto mo = moments(e);
      out.checks.push_back({"mgf", index++, mo.mean, mgf_scir(tp, s, std::span<const double>(mc.ahat)), mo.mean_se,
                            3 * mo.mean_se, seconds_since(start)});
    }
  }
}

void identity_checks(const ExperimentConfig& config, TheoryResult& out) {
  const auto& tc = config.theory;
  RngStream rng(tc.seed, 3000);
  std::vector<TheoryCheck> second;
  for (std::size_t i = 0; i < tc.identity_trials; ++i) {
    const double s = -2.0 + 2.9 * rng.uniform();
    const double h = 0.01 + 1.99 * rng.uniform();
    const std::size_t n = 1 + rng.below(50);
    double iterated = s;
    for (std::size_t k = 0; k < n; ++k) iterated = r_map(iterated, h);
    out.checks.push_back({"composition", i, r_composed(s, h, n), iterated, 0.0, 1e-12, 0.0});
    second.push_back({"product", i, lemma2_product(s, h, n), 1.0 - s * -std::expm1(-static_cast<double>(n) * h),
                          0.0, 1e-12, 0.0});
  }
  out.checks.insert(out.checks.end(), second.begin(), second.end());
}

void stationary_check(const ExperimentConfig& config, TheoryResult& out) {
  const auto start = Clock::now();
  const auto& tc = config.theory;
  const double a = 3.0;
  RngStream rng(tc.seed, 4000);
  std::vector<double> u(tc.chains);
  for (auto& value : u) {
    // Total time 40 from theta = 1 leaves e^{-40} of the initial condition.
    CIRChainState state{1.0, 0, 4.0};
    for (int m = 0; m < 10; ++m) state = cir_transition(rng, state, a, 4.0);
    value = generalized_gamma_cdf(transform_to_generalized_gamma(state.theta), a);
  }
  out.checks.push_back({"stationary", 0, ks_uniform(std::move(u)), 0.0, 0.0, 0.01, seconds_since(start)});
}

}  // namespace

TheoryResult run_theory_checks(const ExperimentConfig& config) {
  config.validate();
  TheoryResult out;
  moment_checks(config, out);
  mgf_checks(config, out);
  identity_checks(config, out);
  stationary_check(config, out);
  return out;
}

}  // namespace scir::harness
