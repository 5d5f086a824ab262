#include "doctest.h"

#include "scir/errors.hpp"
#include "scir/lda.hpp"
#include "test_util.hpp"

using namespace scir;

TEST_CASE("stepsize schedule") {
  const StepsizeSchedule s{0.5, 10.0, 0.33};
  CHECK(s.at(0) == 0.5);
  CHECK(s.at(10) == doctest::Approx(0.5 * std::exp(-0.33 * std::log(2.0))).epsilon(1e-12));
  CHECK(s.at(10) == doctest::Approx(0.3978).epsilon(1e-3));
  CHECK(s.at(1000) < s.at(100));
}

TEST_CASE("local sweep: a single topic takes every token") {
  RngStream rng(1);
  const Document doc{"d", {{0, 2}, {3, 5}}};
  const Eigen::MatrixXd phi = Eigen::MatrixXd::Constant(1, 4, 0.25);
  const auto counts = lda_local_z_sweep(rng, doc, phi, 0.1, 3);
  REQUIRE(counts.size() == 2);
  CHECK(counts[0].topic == 0);
  CHECK(counts[0].word == 0);
  CHECK(counts[0].count == 2);
  CHECK(counts[1].word == 3);
  CHECK(counts[1].count == 5);
}

TEST_CASE("local sweep: disjoint topic supports are deterministic") {
  RngStream rng(2);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(2, 4);
  phi.row(0) << 0.5, 0.5, 0, 0;
  phi.row(1) << 0, 0, 0.3, 0.7;
  const Document doc{"d", {{0, 1}, {1, 2}, {2, 3}, {3, 4}}};
  for (int rep = 0; rep < 20; ++rep) {
    for (const auto& c : lda_local_z_sweep(rng, doc, phi, 0.1, 2)) CHECK(c.topic == (c.word < 2 ? 0u : 1u));
  }
}

TEST_CASE("local sweep: single token follows alpha-weighted phi") {
  RngStream rng(3);
  Eigen::MatrixXd phi(2, 1);
  phi << 0.2, 0.8;
  const Document doc{"d", {{0, 1}}};
  const int reps = 20000;
  int first = 0;
  for (int r = 0; r < reps; ++r) first += lda_local_z_sweep(rng, doc, phi, 0.3, 1).at(0).topic == 0;
  const double p = double(first) / reps;
  CHECK(std::abs(p - 0.2) < 3 * std::sqrt(0.2 * 0.8 / reps));
}

TEST_CASE("local sweep: empty document and zero sweeps") {
  RngStream rng(4);
  const Eigen::MatrixXd phi = Eigen::MatrixXd::Constant(2, 3, 1.0 / 3);
  CHECK(lda_local_z_sweep(rng, Document{"e", {}}, phi, 0.1, 1).empty());
  CHECK_THROWS_AS(lda_local_z_sweep(rng, Document{"e", {{0, 1}}}, phi, 0.1, 0), ParameterError);
  CHECK_THROWS_AS(lda_local_z_sweep(rng, Document{"e", {{5, 1}}}, phi, 0.1, 1), ParameterError);
}

TEST_CASE("state construction and phi rows") {
  RngStream rng(5);
  const auto s = LdaState::initialize(rng, LdaHyper{3, 0.1, 0.5}, 7);
  CHECK(s.topics() == 3);
  CHECK(s.vocab_size() == 7);
  CHECK((s.chains().array() > 0).all());
  const auto phi = s.phi();
  for (int k = 0; k < 3; ++k) CHECK(phi.row(k).sum() == doctest::Approx(1.0));
  CHECK(s.phi_row(1).weights().isApprox(phi.row(1).transpose()));
  CHECK_THROWS_AS(LdaState(LdaHyper{2, 0.1, 0.5}, Eigen::MatrixXd::Ones(3, 4)), ParameterError);
  CHECK_THROWS_AS(LdaState(LdaHyper{1, 0.1, 0.5}, Eigen::MatrixXd::Zero(1, 4)), ParameterError);
  CHECK_THROWS_AS(LdaState(LdaHyper{1, 0.0, 0.5}, Eigen::MatrixXd::Ones(1, 4)), ParameterError);
}

TEST_CASE("empty documents leave the chains at the prior Gamma(beta)") {
  RngStream rng(6);
  const LdaHyper hyper{2, 0.1, 0.5};
  auto state = LdaState::initialize(rng, hyper, 50);
  const Corpus empty(50, std::vector<Document>(10, Document{"e", {}}));
  std::vector<double> values;
  for (int step = 0; step < 2000; ++step) {
    lda_step(Dynamics::scir, rng, state, empty, Minibatch::sample(rng, 10, 3), 1.0, 1);
    if (step >= 20) values.insert(values.end(), state.chains().data(), state.chains().data() + state.chains().size());
  }
  CHECK(state.step() == 2000);
  const auto s = test::summarize(values);
  CHECK(s.mean == doctest::Approx(0.5).epsilon(0.03));
  CHECK(s.variance == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("one topic with the full corpus targets the Dirichlet posterior") {
  RngStream rng(7);
  const LdaHyper hyper{1, 0.1, 0.5};
  const Corpus corpus(4, {Document{"a", {{0, 6}, {1, 2}}}, Document{"b", {{0, 1}, {2, 3}}}});
  Eigen::VectorXd a(4);
  a << 7.5, 2.5, 3.5, 0.5;
  auto state = LdaState::initialize(rng, hyper, 4);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  std::vector<double> first;
  const int steps = 20000;
  for (int m = 0; m < steps + 50; ++m) {
    lda_step(Dynamics::scir, rng, state, corpus, Minibatch::full(2), 0.5, 1);
    if (m < 50) continue;
    const Eigen::VectorXd phi = state.phi().row(0).transpose();
    mean += phi;
    first.push_back(phi[0]);
  }
  mean /= steps;
  const double a0 = a.sum();
  for (int w = 0; w < 4; ++w) CHECK(mean[w] == doctest::Approx(a[w] / a0).epsilon(0.03));
  const auto s = test::summarize(first);
  CHECK(s.variance == doctest::Approx(a[0] * (a0 - a[0]) / (a0 * a0 * (a0 + 1))).epsilon(0.1));
}

TEST_CASE("lda_step validation") {
  RngStream rng(8);
  auto state = LdaState::initialize(rng, LdaHyper{2, 0.1, 0.5}, 5);
  const Corpus other(6, {Document{"a", {{0, 1}}}});
  CHECK_THROWS_AS(lda_step(Dynamics::sgrld, rng, state, other, Minibatch::full(1), 0.1, 1), ParameterError);
  const Corpus ok(5, {Document{"a", {{0, 1}}}});
  CHECK_THROWS_AS(lda_step(Dynamics::scir, rng, state, ok, Minibatch{{}, 1}, 0.1, 1), ParameterError);
  lda_sgrld_step(rng, state, ok, Minibatch::full(1), 0.1, 1);
  lda_scir_step(rng, state, ok, Minibatch::full(1), 0.1, 1);
  CHECK((state.chains().array() > 0).all());
}

TEST_CASE("document topic estimates and perplexity") {
  RngStream rng(9);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(2, 4);
  phi.row(0) << 0.5, 0.5, 0, 0;
  phi.row(1) << 0, 0, 0.5, 0.5;
  const std::vector<std::uint32_t> tokens{0, 1, 1, 0, 1};
  const auto theta = estimate_doc_topics(rng, tokens, phi, 0.1, 10);
  CHECK(theta[0] == doctest::Approx(5.1 / 5.2));
  CHECK(theta[1] == doctest::Approx(0.1 / 5.2));
  CHECK(estimate_doc_topics(rng, {}, phi, 0.1, 10).isApprox(Eigen::VectorXd::Constant(2, 0.5)));

  const Eigen::MatrixXd uniform = Eigen::MatrixXd::Constant(1, 4, 0.25);
  const std::vector<HeldoutDocument> heldout{{{0, 1}, {2, 3}}, {{3}, {1}}};
  const std::vector<Eigen::MatrixXd> samples{uniform, uniform};
  CHECK(lda_perplexity(rng, heldout, samples, 0.1, 4) == doctest::Approx(4.0));
  CHECK_THROWS_AS(lda_perplexity(rng, heldout, {}, 0.1, 4), ParameterError);
}
