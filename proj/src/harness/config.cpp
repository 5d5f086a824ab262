#include "scir/harness/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "scir/errors.hpp"

namespace scir::harness {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ParameterError("config: '" + key + "' expects a number, got '" + value + "'");
  }
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
    const auto out = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ParameterError("config: '" + key + "' expects a nonnegative integer, got '" + value + "'");
  }
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in) {
  ConfigFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParameterError("config line " + std::to_string(line_no) + ": empty key");
    file.values_[key] = trim(line.substr(eq + 1));
  }
  return file;
}

ConfigFile ConfigFile::parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  return parse(in);
}

const std::string& ConfigFile::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ParameterError("config: missing key '" + key + "'");
  return it->second;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double("list", item));
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(text)) out.push_back(to_unsigned("seeds", item));
  return out;
}

void ExperimentConfig::apply(const ConfigFile& file) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto real = [](double& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); };
  };
  auto count = [](std::size_t& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = static_cast<std::size_t>(to_unsigned(k, v)); };
  };
  auto text = [](std::string& field) -> Setter {
    return [&field](const std::string&, const std::string& v) { field = v; };
  };
  auto reals = [](std::vector<double>& field) -> Setter {
    return [&field](const std::string&, const std::string& v) { field = parse_double_list(v); };
  };

  std::map<std::string, Setter> setters{
      {"seeds", [this](const std::string&, const std::string& v) { seeds = parse_seed_list(v); }},
      {"threads", count(threads)},
      {"output", text(output)},
      {"synthetic.posteriors", [this](const std::string&, const std::string& v) { synthetic.posteriors = split_list(v); }},
      {"synthetic.fractions", reals(synthetic.fractions)},
      {"synthetic.scir_grid", reals(synthetic.scir_grid)},
      {"synthetic.sgrld_grid", reals(synthetic.sgrld_grid)},
      {"synthetic.iterations", count(synthetic.iterations)},
      {"synthetic.burn_in", count(synthetic.burn_in)},
      {"synthetic.thin", count(synthetic.thin)},
      {"synthetic.prior", real(synthetic.prior)},
      {"lda.topics", count(lda.topics)},
      {"lda.batch", count(lda.batch)},
      {"lda.iterations", count(lda.iterations)},
      {"lda.eval_every", count(lda.eval_every)},
      {"lda.sweeps", count(lda.sweeps)},
      {"lda.eval_sweeps", count(lda.eval_sweeps)},
      {"lda.eval_window", count(lda.eval_window)},
      {"lda.corpus", text(lda.corpus)},
      {"lda.heldout_corpus", text(lda.heldout_corpus)},
      {"lda.truth", text(lda.truth)},
      {"dp.batch", count(dp.batch)},
      {"dp.iterations", count(dp.iterations)},
      {"dp.eval_every", count(dp.eval_every)},
      {"dp.burn_in", count(dp.burn_in)},
      {"dp.gibbs.base", real(dp.gibbs_base)},
      {"dp.gibbs.sweeps", count(dp.gibbs_sweeps)},
      {"dp.gibbs.burn_in", count(dp.gibbs_burn_in)},
      {"dp.gibbs.init_components", count(dp.gibbs_init_components)},
      {"dp.alpha_shape", real(dp.alpha_shape)},
      {"dp.alpha_rate", real(dp.alpha_rate)},
      {"dp.data", text(dp.data)},
      {"dp.heldout_data", text(dp.heldout_data)},
      {"dp.truth", text(dp.truth)},
      {"gen.topics", count(generate.topics)},
      {"gen.vocab", count(generate.vocab)},
      {"gen.docs", count(generate.docs)},
      {"gen.heldout_docs", count(generate.heldout_docs)},
      {"gen.doc_length", count(generate.doc_length)},
      {"gen.topic_sparsity", real(generate.topic_sparsity)},
      {"gen.doc_concentration", real(generate.doc_concentration)},
      {"gen.clusters", count(generate.clusters)},
      {"gen.users", count(generate.users)},
      {"gen.heldout_users", count(generate.heldout_users)},
      {"gen.dim", count(generate.dim)},
      {"gen.observations", count(generate.observations)},
      {"gen.cluster_sparsity", real(generate.cluster_sparsity)},
      {"gen.seed", [this](const std::string& k, const std::string& v) { generate.seed = to_unsigned(k, v); }},
      {"theory.settings", count(theory.settings)},
      {"theory.chains", count(theory.chains)},
      {"theory.identity_trials", count(theory.identity_trials)},
      {"theory.seed", [this](const std::string& k, const std::string& v) { theory.seed = to_unsigned(k, v); }},
  };
  for (auto* method : {&lda.scir, &lda.sgrld}) {
    const std::string prefix = method == &lda.scir ? "lda.scir." : "lda.sgrld.";
    setters[prefix + "h"] = real(method->h);
    setters[prefix + "tau"] = real(method->tau);
    setters[prefix + "kappa"] = real(method->kappa);
    setters[prefix + "alpha"] = real(method->alpha);
    setters[prefix + "beta"] = real(method->beta);
  }
  for (auto* method : {&dp.scir, &dp.sgrld}) {
    const std::string prefix = method == &dp.scir ? "dp.scir." : "dp.sgrld.";
    setters[prefix + "h_theta"] = real(method->h_theta);
    setters[prefix + "h_dp"] = real(method->h_dp);
    setters[prefix + "base"] = real(method->base);
    setters[prefix + "init_components"] = count(method->init_components);
  }

  for (const auto& [key, value] : file.values()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ParameterError("config: unknown key '" + key + "'");
    it->second(key, value);
  }
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ParameterError("config: seeds must be non-empty");
  if (threads == 0) throw ParameterError("config: threads must be positive");
  if (synthetic.fractions.empty() || synthetic.scir_grid.empty() || synthetic.sgrld_grid.empty()) {
    throw ParameterError("config: synthetic grids must be non-empty");
  }
  for (double f : synthetic.fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw ParameterError("config: minibatch fractions must lie in (0, 1]");
  }
  for (const auto* grid : {&synthetic.scir_grid, &synthetic.sgrld_grid}) {
    for (double h : *grid) {
      if (!(h > 0.0)) throw ParameterError("config: stepsizes must be positive");
    }
  }
  if (!(synthetic.iterations > synthetic.burn_in)) throw ParameterError("config: iterations must exceed burn-in");
  if (synthetic.thin == 0) throw ParameterError("config: thin must be positive");
  if (!(synthetic.prior > 0.0)) throw ParameterError("config: synthetic prior must be positive");
  for (const auto& p : synthetic.posteriors) {
    if (p != "sparse" && p != "dense") throw ParameterError("config: unknown posterior '" + p + "'");
  }
  if (lda.topics == 0 || lda.batch == 0 || lda.iterations == 0 || lda.eval_every == 0 || lda.sweeps == 0) {
    throw ParameterError("config: lda sizes must be positive");
  }
  if (lda.eval_window == 0 || lda.eval_sweeps == 0) throw ParameterError("config: lda evaluation sizes must be positive");
  for (const auto* m : {&lda.scir, &lda.sgrld}) {
    if (!(m->h > 0.0) || !(m->tau > 0.0) || !(m->kappa >= 0.0) || !(m->alpha > 0.0) || !(m->beta > 0.0)) {
      throw ParameterError("config: lda method hyperparameters must be positive");
    }
  }
  if (dp.batch == 0 || dp.iterations == 0 || dp.eval_every == 0) throw ParameterError("config: dp sizes must be positive");
  if (!(dp.iterations > dp.burn_in) || !(dp.gibbs_sweeps > dp.gibbs_burn_in)) {
    throw ParameterError("config: dp iterations must exceed burn-in");
  }
  for (const auto* m : {&dp.scir, &dp.sgrld}) {
    if (!(m->h_theta > 0.0) || !(m->h_dp > 0.0) || !(m->base > 0.0) || m->init_components == 0) {
      throw ParameterError("config: dp method hyperparameters must be positive");
    }
  }
  if (!(dp.alpha_shape > 0.0) || !(dp.alpha_rate > 0.0) || !(dp.gibbs_base > 0.0)) {
    throw ParameterError("config: dp priors must be positive");
  }
  if (generate.topics == 0 || generate.vocab == 0 || generate.docs == 0 || generate.doc_length == 0 ||
      generate.clusters == 0 || generate.users == 0 || generate.dim == 0 || generate.observations == 0) {
    throw ParameterError("config: generator sizes must be positive");
  }
  if (!(generate.topic_sparsity > 0.0) || !(generate.doc_concentration > 0.0) || !(generate.cluster_sparsity > 0.0)) {
    throw ParameterError("config: generator concentrations must be positive");
  }
  if (theory.settings == 0 || theory.chains < 2 || theory.identity_trials == 0) {
    throw ParameterError("config: theory sizes must be positive");
  }
}

}  // namespace scir::harness
