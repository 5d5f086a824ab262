#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scir/harness/config.hpp"
#include "scir/harness/csv.hpp"
#include "scir/harness/experiments.hpp"
#include "scir/harness/synthetic_data.hpp"

namespace fs = std::filesystem;
using namespace scir::harness;

namespace {

std::string output_path(const ExperimentConfig& config, const std::string& fallback) {
  return config.output.empty() ? fallback : config.output;
}

void save(const std::string& path, const std::vector<RunRecord>& records) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  write_run_records_file(path, records);
  std::cout << "wrote " << records.size() << " rows to " << path << '\n';
}

int run_synthetic_command(const ExperimentConfig& config) {
  const auto result = run_synthetic(config);
  for (const auto& c : result.best)
    std::printf("%-7s %-6s seed=%-4llu n/N=%-6g h=%-7g d_ks=%.4f\n", c.posterior.c_str(), to_string(c.method),
                static_cast<unsigned long long>(c.seed), c.fraction, c.h, c.report.d_ks);
  save(output_path(config, "synthetic.csv"), result.records());
  return 0;
}

int run_lda_command(const ExperimentConfig& config) {
  const auto in = load_lda_inputs(config);
  const auto result = run_lda(config, in.train, in.heldout, in.truth ? &*in.truth : nullptr);
  for (const auto& t : result.traces)
    std::printf("%-6s seed=%-4llu final perplexity %.3f\n", scir::to_string(t.method),
                static_cast<unsigned long long>(t.seed), t.final_perplexity());
  if (!std::isnan(result.true_perplexity)) std::printf("true-model perplexity %.3f\n", result.true_perplexity);
  std::printf("unigram perplexity %.3f\n", result.unigram_perplexity);
  save(output_path(config, "lda.csv"), result.records());
  return 0;
}

int run_dpmix_command(const ExperimentConfig& config) {
  const auto in = load_mixture_inputs(config);
  const auto result = run_dpmix(config, in.train, in.heldout, in.truth ? &*in.truth : nullptr);
  for (const auto& t : result.traces)
    std::printf("%-6s seed=%-4llu log predictive %.4f  mean active %.2f  modal active %zu\n", t.method.c_str(),
                static_cast<unsigned long long>(t.seed), t.converged_log_predictive(), t.mean_active_clusters(),
                t.modal_active_clusters());
  if (!std::isnan(result.true_log_predictive))
    std::printf("true-model log predictive %.4f\n", result.true_log_predictive);
  save(output_path(config, "dpmix.csv"), result.records());
  return 0;
}

int run_theory_command(const ExperimentConfig& config) {
  const auto result = run_theory_checks(config);
  std::size_t failed = 0;
  for (const auto& c : result.checks) {
    if (!c.pass()) ++failed;
    if (c.name == "composition" || c.name == "product") continue;
    std::printf("%-10s #%-3zu observed %.6g expected %.6g bound %.3g %s\n", c.name.c_str(), c.index, c.observed,
                c.expected, c.bound, c.pass() ? "ok" : "FAIL");
  }
  std::printf("%zu of %zu checks failed\n", failed, result.checks.size());
  save(output_path(config, "theory.csv"), result.records());
  return failed == 0 ? 0 : 1;
}

int run_generate_command(const ExperimentConfig& config) {
  const fs::path dir = config.output.empty() ? fs::path("data") : fs::path(config.output);
  fs::create_directories(dir);
  const auto lda = generate_lda_dataset(config.generate);
  lda.train.write_file((dir / "lda_train.txt").string());
  lda.heldout.write_file((dir / "lda_heldout.txt").string());
  write_lda_truth((dir / "lda_truth.txt").string(), lda.truth);
  const auto mix = generate_mixture_dataset(config.generate);
  mix.train.write_file((dir / "dp_train.txt").string());
  mix.heldout.write_file((dir / "dp_heldout.txt").string());
  write_mixture_truth((dir / "dp_truth.txt").string(), mix.truth);
  std::cout << "wrote LDA corpus (" << lda.train.size() << " + " << lda.heldout.size() << " docs) and mixture data ("
            << mix.train.size() << " + " << mix.heldout.size() << " users) to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic CIR samplers on the probability simplex: experiments and checks"};
  app.require_subcommand(1);

  std::string config_path, out_path, seeds;
  std::size_t threads = 0;
  app.add_option("--config", config_path, "flat key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "output CSV path (directory for gen-data)");
  app.add_option("--seeds", seeds, "comma-separated seeds, e.g. 1,2,3");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* synthetic = app.add_subcommand("synthetic", "sparse and dense Dirichlet posteriors, KS distances");
  auto* lda = app.add_subcommand("lda", "online LDA perplexity traces");
  auto* dpmix = app.add_subcommand("dpmix", "Dirichlet process mixture log predictive traces");
  auto* theory = app.add_subcommand("theory", "Monte Carlo checks of the closed-form chain moments");
  auto* gen = app.add_subcommand("gen-data", "write synthetic LDA and mixture datasets");
  for (auto* sub : {synthetic, lda, dpmix, theory, gen}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config;
    if (!config_path.empty()) config.apply(ConfigFile::load(config_path));
    if (!out_path.empty()) config.output = out_path;
    if (!seeds.empty()) config.seeds = parse_seed_list(seeds);
    if (threads > 0) config.threads = threads;
    config.validate();

    if (synthetic->parsed()) return run_synthetic_command(config);
    if (lda->parsed()) return run_lda_command(config);
    if (dpmix->parsed()) return run_dpmix_command(config);
    if (theory->parsed()) return run_theory_command(config);
    return run_generate_command(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
