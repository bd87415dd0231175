#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

// Bad argument values or mismatched configuration (CLI exit code 2).
class ParameterError : public std::invalid_argument {
  public:
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Input outside the mathematical domain of an operation (CLI exit code 3).
class DomainError : public std::domain_error {
  public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// An iterative procedure ran out of budget. Carries the best estimate seen
// and the last observed change so callers can decide whether it is usable.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& msg, double best_estimate, double last_delta)
        : std::runtime_error(msg), best(best_estimate), delta(last_delta) {}
    double best;
    double delta;
};

// A checked inequality failed numerically (CLI exit code 4). Distinct from
// ConvergenceError: the computation finished, the math claim did not hold.
class InvariantViolation : public std::runtime_error {
  public:
    explicit InvariantViolation(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace aniso
