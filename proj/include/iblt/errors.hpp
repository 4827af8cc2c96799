#pragma once

#include <stdexcept>
#include <string>

namespace iblt {

// Caller passed something the operation's contract does not accept.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction has no valid parameters for the requested (r, d, n).
class ConstructionInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exhaustive enumeration would exceed the configured state cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iblt
