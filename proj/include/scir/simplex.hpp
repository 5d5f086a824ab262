#pragma once

// Samplers for a Dirichlet(alpha + counts) posterior on the probability
// simplex, driven by minibatch estimates of the counts. Each coordinate
// carries a positive chain targeting Gamma(alpha_j + count_j, 1); the
// simplex point is the normalized chain vector.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scir/cir.hpp"
#include "scir/rng.hpp"
#include "scir/simplex_vector.hpp"

namespace scir {

enum class Dynamics { scir, sgrld };

const char* to_string(Dynamics dynamics);
Dynamics dynamics_from_string(const std::string& name);

// Indices drawn uniformly without replacement from {0, ..., population - 1}.
struct Minibatch {
  std::vector<std::size_t> indices;
  std::size_t population = 0;

  std::size_t size() const { return indices.size(); }
  double scale() const { return static_cast<double>(population) / static_cast<double>(indices.size()); }

  static Minibatch sample(RngStream& rng, std::size_t population, std::size_t n);
  static Minibatch full(std::size_t population);
};

// Per-category counts stored sparsely, sorted by category.
struct SparseCounts {
  std::size_t dim = 0;
  std::size_t num_items = 0;  // N, the dataset size the counts were taken from
  std::vector<std::pair<std::size_t, std::uint64_t>> entries;

  std::uint64_t operator[](std::size_t category) const;
  std::uint64_t total() const;
  Eigen::VectorXd dense() const;

  static SparseCounts from_dense(const std::vector<std::uint64_t>& counts, std::size_t num_items);
};

// N categorical observations z_i, each one category out of dim.
class CategoricalData {
 public:
  CategoricalData(std::size_t dim, std::vector<std::uint32_t> labels);
  // Expands per-category totals into labelled items (category-major order).
  static CategoricalData from_totals(const std::vector<std::uint64_t>& totals);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::uint32_t>& labels() const { return labels_; }

  SparseCounts totals() const;
  SparseCounts count(const Minibatch& batch) const;

 private:
  std::size_t dim_;
  std::vector<std::uint32_t> labels_;
};

// prior + (N / n) * batch_count.
ShapeEstimate estimate_shape(double prior, std::uint64_t batch_count, std::size_t N, std::size_t n);

// Shape estimates for every coordinate: prior + (N / n) * batch counts.
Eigen::VectorXd estimate_shapes(const Eigen::Ref<const Eigen::VectorXd>& prior, const SparseCounts& batch_counts,
                                std::size_t N, std::size_t n);

// Variance of (N / n) * X where X counts a category holding `total` of N items
// in a minibatch of n drawn without replacement (hypergeometric).
double shape_estimate_variance(std::uint64_t total, std::size_t N, std::size_t n);

// Lower bound applied to SGRLD coordinates so sqrt(theta) stays defined.
inline constexpr double kSgrldFloor = 1e-300;

// In-place coordinate updates shared by every model built on these chains.
// SCIR: exact CIR step with shape ahat_j. SGRLD: mirrored Euler-Maruyama step
//   theta <- |theta + h (ahat - theta) + sqrt(2 h theta) eta|.
// One SGRLD coordinate move with standard normal noise eta supplied.
double sgrld_update(double theta, double ahat, double h, double eta);

void advance_scir(RngStream& rng, Eigen::Ref<Eigen::VectorXd> theta, const Eigen::Ref<const Eigen::VectorXd>& ahat,
                  double h);
void advance_sgrld(RngStream& rng, Eigen::Ref<Eigen::VectorXd> theta, const Eigen::Ref<const Eigen::VectorXd>& ahat,
                   double h);
void advance(Dynamics dynamics, RngStream& rng, Eigen::Ref<Eigen::VectorXd> theta,
             const Eigen::Ref<const Eigen::VectorXd>& ahat, double h);

struct SimplexChain {
  Eigen::VectorXd theta;  // positive coordinates
  Eigen::VectorXd prior;  // alpha
  std::uint64_t step = 0;

  SimplexChain(Eigen::VectorXd initial_theta, Eigen::VectorXd prior);
  SimplexVector omega() const { return SimplexVector::normalize(theta); }
};

struct SimplexStep {
  SimplexChain chain;
  SimplexVector omega;
};

SimplexStep scir_simplex_step(RngStream& rng, const SimplexChain& chain, const Minibatch& batch,
                              const CategoricalData& data, double h);
SimplexStep sgrld_simplex_step(RngStream& rng, const SimplexChain& chain, const Minibatch& batch,
                               const CategoricalData& data, double h);
SimplexStep simplex_step(Dynamics dynamics, RngStream& rng, const SimplexChain& chain, const Minibatch& batch,
                         const CategoricalData& data, double h);

// One exact draw from Dir(alpha + counts).
SimplexVector exact_dirichlet_posterior(RngStream& rng, const Eigen::Ref<const Eigen::VectorXd>& alpha,
                                        const SparseCounts& counts);

}  // namespace scir
