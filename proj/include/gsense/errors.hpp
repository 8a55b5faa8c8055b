#pragma once

#include <stdexcept>
#include <string>

namespace gsense {

/// Caller passed an argument outside the operation's domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well formed but violates a documented precondition
/// (e.g. a mixed state handed to a pure-state formula).
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numerical routine could not produce a trustworthy result
/// (singular system, failed factorization, non-convergence).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsense
