#include "scir/lda.hpp"

#include <cmath>

#include "scir/distributions.hpp"
#include "scir/errors.hpp"

namespace scir {

double StepsizeSchedule::at(std::uint64_t m) const {
  return h * std::pow(1.0 + static_cast<double>(m) / tau, -kappa);
}

LdaState::LdaState(LdaHyper hyper, Eigen::MatrixXd chains) : hyper_(hyper), chains_(std::move(chains)) {
  if (hyper_.topics == 0 || static_cast<std::size_t>(chains_.rows()) != hyper_.topics) {
    throw ParameterError("LdaState: need K >= 1 chain rows");
  }
  if (!(hyper_.alpha > 0.0) || !(hyper_.beta > 0.0)) throw ParameterError("LdaState: alpha and beta must be positive");
  if (!(chains_.array() > 0.0).all()) throw ParameterError("LdaState: chains must be positive");
}

LdaState LdaState::initialize(RngStream& rng, const LdaHyper& hyper, std::size_t vocab_size) {
  if (vocab_size == 0) throw ParameterError("LdaState::initialize: empty vocabulary");
  Eigen::MatrixXd chains(static_cast<Eigen::Index>(hyper.topics), static_cast<Eigen::Index>(vocab_size));
  for (Eigen::Index k = 0; k < chains.rows(); ++k) {
    for (Eigen::Index w = 0; w < chains.cols(); ++w) chains(k, w) = sample_gamma(rng, 1.0);
  }
  return LdaState(hyper, std::move(chains));
}

Eigen::MatrixXd LdaState::phi() const {
  Eigen::MatrixXd out = chains_;
  for (Eigen::Index k = 0; k < out.rows(); ++k) out.row(k) /= out.row(k).sum();
  return out;
}

SimplexVector LdaState::phi_row(std::size_t k) const {
  return SimplexVector::normalize(chains_.row(static_cast<Eigen::Index>(k)).transpose());
}

namespace {

// Gibbs sweeps over `tokens`; calls visit(z) after each sweep.
template <typename Visit>
void collapsed_sweeps(RngStream& rng, std::span<const std::uint32_t> tokens,
                      const Eigen::Ref<const Eigen::MatrixXd>& phi, double alpha, std::size_t sweeps, Visit&& visit) {
  const Eigen::Index topics = phi.rows();
  std::vector<std::uint32_t> z(tokens.size());
  Eigen::VectorXd topic_counts = Eigen::VectorXd::Zero(topics);
  Eigen::VectorXd weights(topics);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    z[t] = static_cast<std::uint32_t>(sample_categorical(rng, phi.col(tokens[t])));
    topic_counts[z[t]] += 1.0;
  }
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      topic_counts[z[t]] -= 1.0;
      weights = (topic_counts.array() + alpha) * phi.col(tokens[t]).array();
      z[t] = static_cast<std::uint32_t>(sample_categorical(rng, weights));
      topic_counts[z[t]] += 1.0;
    }
    visit(z, topic_counts);
  }
}

}  // namespace

std::vector<TopicWordCount> lda_local_z_sweep(RngStream& rng, const Document& doc,
                                              const Eigen::Ref<const Eigen::MatrixXd>& phi, double alpha,
                                              std::size_t sweeps) {
  if (sweeps == 0) throw ParameterError("lda_local_z_sweep: need at least one sweep");
  const auto tokens = doc.tokens();
  if (tokens.empty()) return {};
  for (auto w : tokens) {
    if (w >= phi.cols()) throw ParameterError("lda_local_z_sweep: word outside vocabulary");
  }
  std::vector<std::uint32_t> final_z;
  collapsed_sweeps(rng, tokens, phi, alpha, sweeps,
                   [&](const std::vector<std::uint32_t>& z, const Eigen::VectorXd&) { final_z = z; });
  // Tokens are in word order, so equal (topic, word) pairs are merged per word run.
  std::vector<TopicWordCount> out;
  std::size_t start = 0;
  while (start < tokens.size()) {
    std::size_t end = start;
    while (end < tokens.size() && tokens[end] == tokens[start]) ++end;
    std::vector<std::uint32_t> per_topic(static_cast<std::size_t>(phi.rows()), 0);
    for (std::size_t t = start; t < end; ++t) ++per_topic[final_z[t]];
    for (std::size_t k = 0; k < per_topic.size(); ++k) {
      if (per_topic[k] > 0) out.push_back({static_cast<std::uint32_t>(k), tokens[start], per_topic[k]});
    }
    start = end;
  }
  return out;
}

void lda_step(Dynamics dynamics, RngStream& rng, LdaState& state, const Corpus& corpus, const Minibatch& batch,
              double h, std::size_t sweeps) {
  if (batch.size() == 0) throw ParameterError("lda_step: empty minibatch");
  if (corpus.vocab_size() != state.vocab_size()) throw ParameterError("lda_step: vocabulary mismatch");
  const Eigen::MatrixXd phi = state.phi();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(phi.rows(), phi.cols());
  for (auto l : batch.indices) {
    for (const auto& entry : lda_local_z_sweep(rng, corpus[l], phi, state.hyper().alpha, sweeps)) {
      counts(entry.topic, entry.word) += entry.count;
    }
  }
  const double scale = static_cast<double>(corpus.size()) / static_cast<double>(batch.size());
  for (Eigen::Index k = 0; k < phi.rows(); ++k) {
    const Eigen::VectorXd ahat = (state.hyper().beta + scale * counts.row(k).array()).matrix().transpose();
    Eigen::VectorXd row = state.chains().row(k).transpose();
    advance(dynamics, rng, row, ahat, h);
    state.chains().row(k) = row.transpose();
  }
  state.advance_step();
}

void lda_scir_step(RngStream& rng, LdaState& state, const Corpus& corpus, const Minibatch& batch, double h,
                   std::size_t sweeps) {
  lda_step(Dynamics::scir, rng, state, corpus, batch, h, sweeps);
}

void lda_sgrld_step(RngStream& rng, LdaState& state, const Corpus& corpus, const Minibatch& batch, double h,
                    std::size_t sweeps) {
  lda_step(Dynamics::sgrld, rng, state, corpus, batch, h, sweeps);
}

Eigen::VectorXd estimate_doc_topics(RngStream& rng, std::span<const std::uint32_t> tokens,
                                    const Eigen::Ref<const Eigen::MatrixXd>& phi, double alpha, std::size_t sweeps) {
  const Eigen::Index topics = phi.rows();
  const double denom_base = static_cast<double>(topics) * alpha + static_cast<double>(tokens.size());
  if (tokens.empty() || sweeps == 0) return Eigen::VectorXd::Constant(topics, 1.0 / static_cast<double>(topics));
  const std::size_t burn_in = sweeps / 2;
  std::size_t sweep = 0;
  std::size_t kept = 0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(topics);
  collapsed_sweeps(rng, tokens, phi, alpha, sweeps, [&](const std::vector<std::uint32_t>&, const Eigen::VectorXd& c) {
    if (sweep++ < burn_in) return;
    mean += ((c.array() + alpha) / denom_base).matrix();
    ++kept;
  });
  return mean / static_cast<double>(kept);
}

double lda_perplexity(RngStream& rng, std::span<const HeldoutDocument> heldout,
                      std::span<const Eigen::MatrixXd> phi_samples, double alpha, std::size_t sweeps) {
  if (phi_samples.empty()) throw ParameterError("lda_perplexity: no phi samples");
  // Per held-out document, the predictive averaged over phi samples.
  std::vector<Eigen::MatrixXd> doc_topics;  // per sample: docs x K
  doc_topics.reserve(phi_samples.size());
  for (const auto& phi : phi_samples) {
    Eigen::MatrixXd topics(static_cast<Eigen::Index>(heldout.size()), phi.rows());
    for (std::size_t l = 0; l < heldout.size(); ++l) {
      topics.row(static_cast<Eigen::Index>(l)) =
          estimate_doc_topics(rng, heldout[l].estimation, phi, alpha, sweeps).transpose();
    }
    doc_topics.push_back(std::move(topics));
  }
  const double inv_samples = 1.0 / static_cast<double>(phi_samples.size());
  return perplexity(heldout, [&](std::size_t doc, std::uint32_t word) {
    double p = 0.0;
    for (std::size_t s = 0; s < phi_samples.size(); ++s) {
      p += doc_topics[s].row(static_cast<Eigen::Index>(doc)).dot(phi_samples[s].col(word));
    }
    return p * inv_samples;
  });
}

}  // namespace scir
