#pragma once

#include <stdexcept>
#include <string>

namespace lyz {

/// Invalid input: out-of-range temperature, bad branching number, malformed tree.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The query is well formed but lands where the quantity does not exist,
/// e.g. a Lyapunov exponent requested on or above the phi_e curve.
class DomainError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A numerical procedure failed: non-convergence, overflow, broken invariant.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lyz
