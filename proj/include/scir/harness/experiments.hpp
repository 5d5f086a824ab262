#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scir/corpus.hpp"
#include "scir/evaluation.hpp"
#include "scir/harness/config.hpp"
#include "scir/harness/csv.hpp"
#include "scir/harness/synthetic_data.hpp"
#include "scir/simplex.hpp"

namespace scir::harness {

// Runs task(i) for i in [0, count) on up to `threads` workers. Results must
// be written to slots owned by i, so output never depends on scheduling.
void parallel_cells(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task);

// Training data for the model experiments: read from the configured files,
// or generated from the gen.* settings when no file is configured.
struct LdaInputs {
  Corpus train;
  Corpus heldout;
  std::optional<LdaTruth> truth;
};
LdaInputs load_lda_inputs(const ExperimentConfig& config);

struct MixtureInputs {
  Corpus train;
  Corpus heldout;
  std::optional<MixtureTruth> truth;
};
MixtureInputs load_mixture_inputs(const ExperimentConfig& config);

LdaDataset generate_lda_dataset(const GenerateConfig& gen);
MixtureDataset generate_mixture_dataset(const GenerateConfig& gen);

// ---- synthetic Dirichlet posteriors -------------------------------------

// Category totals of the two running-experiment datasets (N = 1000, d = 10).
std::vector<std::uint64_t> synthetic_counts(const std::string& posterior);

enum class SyntheticMethod { scir, sgrld, exact };
const char* to_string(SyntheticMethod method);

// Post-burn-in samples (every `thin`-th) of a single chain started at theta = 1.
// The exact method ignores fraction and h and draws independently.
SampleMatrix run_simplex_sampler(SyntheticMethod method, RngStream& rng, const std::vector<std::uint64_t>& counts,
                                 double prior, double fraction, double h, std::size_t iterations,
                                 std::size_t burn_in, std::size_t thin);

struct SyntheticCell {
  std::string posterior;
  SyntheticMethod method;
  std::uint64_t seed;
  double fraction;
  double h;
  KSReport report;
  std::array<double, 5> omega5_quantiles{};  // min, q25, median, q75, max
};

struct SyntheticResult {
  std::vector<SyntheticCell> cells;  // every (posterior, method, seed, fraction, h)
  std::vector<SyntheticCell> best;   // best h by d_KS per (posterior, method, seed, fraction)

  const SyntheticCell& find_best(const std::string& posterior, SyntheticMethod method, std::uint64_t seed,
                                 double fraction) const;
  std::vector<RunRecord> records() const;
};

SyntheticResult run_synthetic(const ExperimentConfig& config);

// ---- LDA ----------------------------------------------------------------

struct LdaEval {
  std::uint64_t iteration;
  double perplexity;
};

struct LdaTrace {
  Dynamics method;
  std::uint64_t seed;
  std::vector<LdaEval> evals;

  double final_perplexity() const;
};

struct LdaResult {
  std::vector<LdaTrace> traces;
  double true_perplexity = 0.0;  // NaN when no truth was supplied
  double unigram_perplexity = 0.0;

  const LdaTrace& find(Dynamics method, std::uint64_t seed) const;
  std::vector<RunRecord> records() const;
};

LdaResult run_lda(const ExperimentConfig& config, const Corpus& train, const Corpus& heldout,
                  const LdaTruth* truth = nullptr);

// Smoothed unigram model of `train` scored on the evaluation halves of `heldout`.
double unigram_perplexity(const Corpus& train, const Corpus& heldout);

// ---- DP mixture ---------------------------------------------------------

struct DpEval {
  std::uint64_t iteration;
  double log_predictive;
  std::size_t active_clusters;
};

struct DpTrace {
  std::string method;  // scir, sgrld, gibbs
  std::uint64_t seed;
  std::vector<DpEval> evals;
  std::vector<std::size_t> active;  // per iteration
  std::size_t burn_in = 0;

  double converged_log_predictive() const;  // mean over evaluations at or after burn-in
  double mean_active_clusters() const;      // mean over iterations at or after burn-in
  std::size_t modal_active_clusters() const;
};

struct DpResult {
  std::vector<DpTrace> traces;
  double true_log_predictive = 0.0;  // NaN when no truth was supplied

  const DpTrace& find(const std::string& method, std::uint64_t seed) const;
  std::vector<RunRecord> records() const;
};

DpResult run_dpmix(const ExperimentConfig& config, const Corpus& train, const Corpus& heldout,
                   const MixtureTruth* truth = nullptr);

// ---- theory -------------------------------------------------------------

struct TheoryCheck {
  std::string name;
  std::size_t index;
  double observed;
  double expected;
  double standard_error;  // 0 for deterministic checks
  double bound;           // allowed |observed - expected|
  double seconds;

  bool pass() const;
};

struct TheoryResult {
  std::vector<TheoryCheck> checks;

  std::vector<TheoryCheck> named(const std::string& name) const;
  std::vector<RunRecord> records() const;
};

// Monte Carlo against closed forms for the mean, variance and MGF of the
// stochastic chain, the composition identities, and the stationary
// transform. Groups: mean, variance, mgf, composition, product, stationary.
TheoryResult run_theory_checks(const ExperimentConfig& config);

// n draws without replacement from N items of which `successes` are marked.
std::uint64_t sample_hypergeometric(RngStream& rng, std::uint64_t N, std::uint64_t successes, std::uint64_t n);

}  // namespace scir::harness
