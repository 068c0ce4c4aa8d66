#pragma once

#include <stdexcept>
#include <string>

namespace cmr {

/// Input outside the domain of an operation (bad alpha, invalid epsilon, malformed distribution).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A stochastic-ordering precondition failed; `tail_index` is the first degree K whose tail sums disagree.
struct OrderingError : std::invalid_argument {
  OrderingError(const std::string& what, int tail_index)
      : std::invalid_argument(what), tail_index(tail_index) {}
  int tail_index;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a computation that requires a supercritical configuration lands in the subcritical regime.
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InfeasibleRemoval : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace cmr
