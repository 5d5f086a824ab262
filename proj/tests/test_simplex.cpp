#include "doctest.h"

#include <set>

#include "scir/distributions.hpp"
#include "scir/evaluation.hpp"
#include "scir/harness/experiments.hpp"
#include "scir/simplex.hpp"
#include "test_util.hpp"

using namespace scir;
using scir::test::summarize;

namespace {

const std::vector<std::uint64_t> kSparse{800, 100, 100, 0, 0, 0, 0, 0, 0, 0};
const std::vector<std::uint64_t> kDense{112, 119, 92, 98, 95, 96, 102, 92, 91, 103};

Eigen::VectorXd prior(std::size_t d, double a = 0.1) { return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), a); }

}  // namespace

TEST_CASE("shape estimates") {
  CHECK(estimate_shape(0.1, 800, 1000, 1000).total() == doctest::Approx(800.1));
  CHECK(estimate_shape(0.1, 8, 1000, 10).total() == doctest::Approx(800.1));
  CHECK(estimate_shape(0.1, 0, 1000, 10).total() == 0.1);
  CHECK_THROWS_AS(estimate_shape(0.1, 0, 1000, 0), ParameterError);
  CHECK_THROWS_AS(estimate_shape(0.1, 0, 10, 11), ParameterError);

  const auto data = CategoricalData::from_totals(kSparse);
  const auto full = estimate_shapes(prior(10), data.totals(), 1000, 1000);
  for (int j = 0; j < 10; ++j) CHECK(full[j] == doctest::Approx(0.1 + double(kSparse[j])));
}

TEST_CASE("shape estimates are unbiased over random minibatches") {
  const auto data = CategoricalData::from_totals(kDense);
  RngStream rng(1);
  std::vector<std::vector<double>> draws(10);
  for (int t = 0; t < 10000; ++t) {
    const auto batch = Minibatch::sample(rng, data.size(), 20);
    const auto ahat = estimate_shapes(prior(10), data.count(batch), data.size(), batch.size());
    for (int j = 0; j < 10; ++j) draws[j].push_back(ahat[j]);
  }
  for (int j = 0; j < 10; ++j) {
    const auto s = summarize(draws[j]);
    CHECK(std::abs(s.mean - (0.1 + double(kDense[j]))) < 3 * s.mean_se);
    CHECK(s.variance == doctest::Approx(shape_estimate_variance(kDense[j], 1000, 20)).epsilon(0.05));
  }
}

TEST_CASE("minibatches are distinct indices of the requested size") {
  RngStream rng(2);
  for (std::size_t n : {1, 10, 500, 1000}) {
    const auto b = Minibatch::sample(rng, 1000, n);
    CHECK(b.size() == n);
    std::set<std::size_t> unique(b.indices.begin(), b.indices.end());
    CHECK(unique.size() == n);
    CHECK(*unique.rbegin() < 1000);
    CHECK(b.scale() == doctest::Approx(1000.0 / double(n)));
  }
  CHECK_THROWS_AS(Minibatch::sample(rng, 10, 0), ParameterError);
  CHECK_THROWS_AS(Minibatch::sample(rng, 10, 11), ParameterError);
  CHECK(Minibatch::full(5).size() == 5);
}

TEST_CASE("sparse counts") {
  const auto c = SparseCounts::from_dense({0, 3, 0, 5}, 8);
  CHECK(c.entries.size() == 2);
  CHECK(c[1] == 3);
  CHECK(c[2] == 0);
  CHECK(c.total() == 8);
  CHECK(c.dense()[3] == 5.0);
  CHECK_THROWS_AS(CategoricalData(2, {0, 2}), ParameterError);
}

TEST_CASE("one-dimensional simplex is the point (1)") {
  const CategoricalData data(1, {0, 0, 0});
  RngStream rng(3);
  SimplexChain chain(Eigen::VectorXd::Ones(1), prior(1));
  for (auto dynamics : {Dynamics::scir, Dynamics::sgrld}) {
    for (int m = 0; m < 10; ++m) {
      auto step = simplex_step(dynamics, rng, chain, Minibatch::sample(rng, 3, 2), data, 0.1);
      CHECK(step.omega[0] == 1.0);
    }
  }
}

TEST_CASE("both samplers emit valid simplex points at every step") {
  const auto data = CategoricalData::from_totals(kSparse);
  RngStream rng(4);
  for (auto dynamics : {Dynamics::scir, Dynamics::sgrld}) {
    SimplexChain chain(Eigen::VectorXd::Ones(10), prior(10));
    for (int m = 0; m < 2000; ++m) {
      auto step = simplex_step(dynamics, rng, chain, Minibatch::sample(rng, 1000, 10), data, 0.05);
      REQUIRE(std::abs(step.omega.weights().sum() - 1.0) < 1e-10);
      REQUIRE((step.omega.weights().array() >= 0).all());
      REQUIRE((step.chain.theta.array() > 0).all());
      chain = std::move(step.chain);
    }
    CHECK(chain.step == 2000);
  }
}

TEST_CASE("full-batch SCIR reproduces the exact posterior marginals") {
  const auto data = CategoricalData::from_totals(kSparse);
  RngStream rng(5);
  SimplexChain chain(Eigen::VectorXd::Ones(10), prior(10));
  const auto batch = Minibatch::full(1000);
  const int kept = 10000, thin = 5;
  std::vector<std::vector<double>> omega(10), theta(10);
  for (int m = 0; m < 100 + kept * thin; ++m) {
    auto step = scir_simplex_step(rng, chain, batch, data, 1.0);
    chain = std::move(step.chain);
    if (m >= 100 && (m - 100) % thin == 0) {
      for (int j = 0; j < 10; ++j) {
        omega[j].push_back(step.omega[j]);
        theta[j].push_back(chain.theta[j]);
      }
    }
  }
  const double total = 1001.0;
  for (int j = 0; j < 10; ++j) {
    const double a = 0.1 + double(kSparse[j]);
    std::vector<double> u_omega, u_theta;
    for (double x : omega[j]) u_omega.push_back(cdf_beta(x, a, total - a));
    for (double x : theta[j]) u_theta.push_back(cdf_gamma(x, a));
    CHECK(ks_uniform(u_omega) < 0.02);
    CHECK(ks_uniform(u_theta) < 0.02);
  }
}

TEST_CASE("full-batch SCIR is the coordinatewise exact transition") {
  const auto data = CategoricalData::from_totals(kDense);
  RngStream a(6), b(6);
  SimplexChain chain(Eigen::VectorXd::Constant(10, 0.7), prior(10));
  const auto step = scir_simplex_step(a, chain, Minibatch::full(1000), data, 0.3);
  for (int j = 0; j < 10; ++j) {
    const auto expected = cir_transition(b, {0.7, 0, 0.3}, 0.1 + double(kDense[j]), 0.3);
    CHECK(step.chain.theta[j] == expected.theta);
  }
}

TEST_CASE("SGRLD: zero step and drift fixed point") {
  const auto data = CategoricalData::from_totals(kDense);
  RngStream rng(7);
  SimplexChain chain(Eigen::VectorXd::LinSpaced(10, 1, 10), prior(10));
  const auto step = sgrld_simplex_step(rng, chain, Minibatch::sample(rng, 1000, 10), data, 0.0);
  CHECK(step.chain.theta == chain.theta);
  CHECK(sgrld_update(3.5, 3.5, 0.1, 0.0) == 3.5);
  CHECK(sgrld_update(1.0, 2.0, 0.1, 0.0) == doctest::Approx(1.1));
  CHECK(sgrld_update(0.01, 0.1, 0.5, -10.0) > 0.0);
  CHECK(sgrld_update(1e-300, 0.0 + 1e-300, 1e-3, 0.0) >= kSgrldFloor);
}

TEST_CASE("SGRLD overstates a sparse coordinate") {
  const auto data = CategoricalData::from_totals(kSparse);
  RngStream rng(8);
  SimplexChain chain(Eigen::VectorXd::Ones(10), prior(10));
  double sum = 0;
  for (int m = 0; m < 1000; ++m) {
    auto step = sgrld_simplex_step(rng, chain, Minibatch::sample(rng, 1000, 10), data, 0.01);
    chain = std::move(step.chain);
    sum += step.omega[4];
  }
  CHECK(sum / 1000 > 2 * 0.1 / 1001.0);
}

TEST_CASE("exact posterior draws") {
  RngStream rng(9);
  const auto zero = SparseCounts::from_dense(std::vector<std::uint64_t>(3, 0), 0);
  std::vector<double> first, last;
  for (int i = 0; i < 100000; ++i) {
    const auto x = exact_dirichlet_posterior(rng, prior(3, 2.0), zero);
    first.push_back(x[0]);
    last.push_back(x[2]);
  }
  CHECK(std::abs(summarize(first).mean - summarize(last).mean) < 5 * summarize(first).mean_se);

  for (const auto* counts : {&kSparse, &kDense}) {
    const auto c = SparseCounts::from_dense(*counts, 1000);
    std::vector<std::vector<double>> m(10);
    for (int i = 0; i < 100000; ++i) {
      const auto x = exact_dirichlet_posterior(rng, prior(10), c);
      for (int j = 0; j < 10; ++j) m[j].push_back(x[j]);
    }
    for (int j = 0; j < 10; ++j) {
      const auto s = summarize(m[j]);
      CHECK(std::abs(s.mean - (0.1 + double((*counts)[j])) / 1001.0) < 5 * s.mean_se);
    }
  }
  CHECK((0.1 + 800) / 1001.0 == doctest::Approx(0.7993).epsilon(1e-4));
}

TEST_CASE("SCIR beats SGRLD on the sparse posterior at one percent minibatches") {
  harness::SyntheticConfig sc;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Eigen::VectorXd alpha(10);
    for (int j = 0; j < 10; ++j) alpha[j] = 0.1 + double(kSparse[j]);
    auto best = [&](harness::SyntheticMethod method, const std::vector<double>& grid) {
      double d = 1.0;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        RngStream rng(seed, 50 + k);
        const auto samples = harness::run_simplex_sampler(method, rng, kSparse, 0.1, 0.01, grid[k], 2000, 1000, 1);
        d = std::min(d, dirichlet_ks_distance(samples, alpha).d_ks);
      }
      return d;
    };
    CHECK(best(harness::SyntheticMethod::scir, sc.scir_grid) < best(harness::SyntheticMethod::sgrld, sc.sgrld_grid));
  }
}

TEST_CASE("chain validation") {
  CHECK_THROWS_AS(SimplexChain(Eigen::VectorXd::Zero(2), prior(2)), ParameterError);
  CHECK_THROWS_AS(SimplexChain(Eigen::VectorXd::Ones(2), prior(3)), ParameterError);
  CHECK_THROWS_AS(SimplexChain(Eigen::VectorXd::Ones(2), prior(2, 0.0)), ParameterError);
  CHECK(dynamics_from_string("scir") == Dynamics::scir);
  CHECK(std::string(to_string(Dynamics::sgrld)) == "sgrld");
  CHECK_THROWS_AS(dynamics_from_string("euler"), ParameterError);
}
