#pragma once

#include <stdexcept>
#include <string>

namespace bagstab {

/// Points from different spaces, or of different dimensions, were combined.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter lies outside the domain of an operation.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact enumeration would exceed its configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver stopped before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fit failed inside the engine; the message carries the bag or
/// leave-one-out index where it happened.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ArgumentError with `what` when `cond` is false.
void require(bool cond, const std::string& what);

}  // namespace bagstab
