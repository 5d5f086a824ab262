#pragma once

#include <stdexcept>
#include <string>

namespace scir {

// Invalid or non-finite parameters passed to a sampler, density or CDF.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the domain of a closed-form expression (MGF poles etc).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A distribution with no mass to sample from, e.g. all-zero categorical weights.
class DegenerateDistributionError : public std::runtime_error {
 public:
  explicit DegenerateDistributionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scir
