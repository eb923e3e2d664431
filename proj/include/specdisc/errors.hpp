#pragma once

#include <stdexcept>
#include <string>

namespace specdisc {

/// Malformed or out-of-contract input (bad model file, invalid rates, bad flags).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computed result failed its own residual or identity check.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iteration that was required to converge did not.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace specdisc
