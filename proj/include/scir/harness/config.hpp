#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace scir::harness {

// Flat `key = value` text, one entry per line, `#` starts a comment.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in);
  static ConfigFile parse_text(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool contains(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& raw(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

 private:
  std::map<std::string, std::string> values_;
};

struct SyntheticConfig {
  std::vector<std::string> posteriors{"sparse", "dense"};
  std::vector<double> fractions{0.001, 0.01, 0.1, 0.5};
  std::vector<double> scir_grid{1.0, 5e-1, 1e-1, 5e-2, 1e-2, 5e-3, 1e-3};
  std::vector<double> sgrld_grid{5e-1, 1e-1, 5e-2, 1e-2, 5e-3, 1e-3, 5e-4, 1e-4};
  std::size_t iterations = 2000;  // total, including burn-in
  std::size_t burn_in = 1000;
  std::size_t thin = 1;
  double prior = 0.1;
};

struct LdaMethodConfig {
  double h;
  double tau;
  double kappa;
  double alpha;
  double beta;
};

struct LdaConfig {
  std::size_t topics = 3;
  std::size_t batch = 50;
  std::size_t iterations = 500;
  std::size_t eval_every = 5;
  std::size_t sweeps = 5;
  std::size_t eval_sweeps = 10;
  std::size_t eval_window = 4;  // phi samples averaged per evaluation
  LdaMethodConfig scir{0.5, 10.0, 0.33, 0.1, 0.5};
  LdaMethodConfig sgrld{0.01, 1000.0, 0.6, 0.01, 0.0001};
  std::string corpus;          // training corpus file; generated when empty
  std::string heldout_corpus;  // held-out corpus file
  std::string truth;           // optional generating-parameter sidecar
};

struct DpMethodConfig {
  double h_theta;
  double h_dp;
  double base;
  std::size_t init_components;
};

struct DpConfig {
  std::size_t batch = 100;
  std::size_t iterations = 1500;
  std::size_t eval_every = 25;
  std::size_t burn_in = 500;
  DpMethodConfig scir{0.1, 0.1, 0.5, 20};
  DpMethodConfig sgrld{0.001, 0.005, 0.001, 30};
  double gibbs_base = 0.5;
  std::size_t gibbs_sweeps = 300;
  std::size_t gibbs_burn_in = 100;
  std::size_t gibbs_init_components = 20;
  double alpha_shape = 1.0;
  double alpha_rate = 1.0;
  std::string data;          // training users file; generated when empty
  std::string heldout_data;  // held-out users file
  std::string truth;         // optional generating-parameter sidecar
};

struct GenerateConfig {
  // LDA corpus
  std::size_t topics = 3;
  std::size_t vocab = 100;
  std::size_t docs = 500;
  std::size_t heldout_docs = 100;
  std::size_t doc_length = 50;
  double topic_sparsity = 0.05;
  double doc_concentration = 0.2;
  // DP mixture users
  std::size_t clusters = 4;
  std::size_t users = 2000;
  std::size_t heldout_users = 200;
  std::size_t dim = 20;
  std::size_t observations = 10;
  double cluster_sparsity = 0.1;
  std::uint64_t seed = 2024;
};

struct TheoryConfig {
  std::size_t settings = 10;
  std::size_t chains = 100000;
  std::size_t identity_trials = 100;
  std::uint64_t seed = 7;
};

struct ExperimentConfig {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t threads = 1;
  std::string output;
  SyntheticConfig synthetic;
  LdaConfig lda;
  DpConfig dp;
  GenerateConfig generate;
  TheoryConfig theory;

  // Throws ParameterError on unknown keys or malformed values.
  void apply(const ConfigFile& file);
  void validate() const;
};

std::vector<double> parse_double_list(const std::string& text);
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace scir::harness
