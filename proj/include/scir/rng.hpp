#pragma once

#include <cstdint>
#include <random>

namespace scir {

// Seeded random stream. One stream per chain or worker; streams with the
// same seed but different stream_id are seeded from disjoint SplitMix64
// expansions of (seed, stream_id) and are treated as independent.
class RngStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform();
  double normal();
  // Poisson variate; mean may be 0.
  std::uint64_t poisson(double mean);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  engine_type& engine() { return engine_; }

  // Derive a child stream; used to hand independent streams to sub-tasks.
  RngStream split(std::uint64_t child_id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace scir
