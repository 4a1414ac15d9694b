#pragma once

#include <stdexcept>
#include <string>

namespace bcmc {

// Bad configuration from the caller: unknown key, out-of-range parameter, malformed document.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A stated mathematical hypothesis failed its numeric probe. The message names the condition.
struct HypothesisError : std::domain_error {
  using std::domain_error::domain_error;
};

// Window whose all-clear probability is exactly zero: some index in it occurs almost surely
// given every reachable history, so the complement factorization degenerates.
struct DegenerateWindowError : std::domain_error {
  using std::domain_error::domain_error;
};

// Conditional criterion term whose conditioning event has probability below 1e-300.
struct UndefinedTermError : std::domain_error {
  using std::domain_error::domain_error;
};

// Enumeration or subdivision budget exceeded before starting the computation.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Quadrature ran out of panels before meeting the tolerance. Carries the best value reached
// and its error estimate so callers can still inspect the partial result.
struct AccuracyError : std::runtime_error {
  AccuracyError(const std::string& what, double value_, double estimate_)
      : std::runtime_error(what), value(value_), estimate(estimate_) {}
  double value;
  double estimate;
};

// Two independent routes to the same quantity produced decisive, conflicting answers.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace bcmc
