#pragma once

#include <stdexcept>

namespace heunforge {

/// Input outside the accepted shape: degree bounds, parameter invariants.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-posed request that has no admissible answer.
class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A case the solvers detect but do not treat (repeated roots of sigma,
/// resonant indicial exponents).
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An independent check disagreed with a computed result.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heunforge
