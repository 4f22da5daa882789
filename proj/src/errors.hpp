#pragma once

#include <stdexcept>
#include <string>

namespace dane {

// Bad user-supplied configuration. Messages name the offending key or field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure while running (singular local system, diverging iterates,
// broken monotonicity). Messages name the round/machine where known.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse: dimension mismatches and other violated preconditions.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Operation not defined for the given inputs (e.g. direct minimization of a
// non-quadratic loss).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dane
