#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bcmc/series.hpp"

namespace bcmc {

// Time-inhomogeneous law of a 0/1 event sequence whose indicators form a
// Markov chain of order k. Histories are k-bit integers, oldest bit most
// significant, newest bit least significant. transition(n, h) returns
// P(event at n+1 occurs | last k indicators ending at index n equal h),
// valid for n >= order.
struct IndicatorKernel {
  int order = 1;
  std::function<double(std::int64_t, unsigned)> transition;
  // Distribution of the first k indicators, indexed by the same bit packing.
  std::vector<double> initial_dist;
  // Smallest index from which the event is guaranteed non-certain, so
  // conditioning on its complement is well defined.
  std::int64_t safe_start_index = 1;
};

// Order-1 convenience constructor. stay(n) = P(hit at n+1 | hit at n),
// enter(n) = P(hit at n+1 | miss at n), first_prob = P(hit at 1).
IndicatorKernel make_order1(std::function<double(std::int64_t)> stay,
                            std::function<double(std::int64_t)> enter,
                            double first_prob,
                            std::int64_t safe_start_index = 1);

// Throws ConfigError on malformed kernels (bad order, initial distribution
// not summing to 1, missing transition).
void validate(const IndicatorKernel& kernel);

// Forward distribution over the 2^k histories ending at index n.
struct ChainMarginals {
  std::int64_t index = 0;
  std::vector<double> state_probs;
  double marginal = 0.0;  // P(event at index n)
};

// Exact forward recursion from the initial distribution. Requires n >= order.
ChainMarginals forward_marginals(const IndicatorKernel& kernel, std::int64_t n);

// P(at least one event in [n, T]) = 1 - P(no event in [n, T]), the all-clear
// probability accumulated in log domain so long windows cannot underflow.
// Requires order <= n <= T and n >= safe_start_index. Throws
// DegenerateWindowError when the all-clear probability is exactly zero
// (some index in the window is a certain event).
double tail_union_window(const IndicatorKernel& kernel, std::int64_t n, std::int64_t T);

// Families of per-index summands whose convergence or divergence decides the
// zero/one occurrence dichotomy.
enum class CriterionKind {
  HitAfterClear,    // P(hit at n+1 | miss at n), order-1 kernels only
  ClearThenHit,     // P(miss at n, hit at n+1), order-1 kernels only
  HitThenClear,     // P(hit at n, miss at n+1), order-1 kernels only
  ZeroRunThenHit,   // P(miss at n..n+m-1, hit at n+m), joint form
  HitAfterZeroRun,  // P(hit at n+m | miss at n..n+m-1), conditional form
};

// Builds the summand generator for the requested kind. run_length is the run
// width m for the zero-run kinds (defaults to the kernel order when < 0) and
// must be omitted for the two-term kinds. Conditional kinds throw
// UndefinedTermError at indices where the conditioning event has probability
// below 1e-300. The returned closures share a monotone forward cursor, so
// ascending evaluation (as done by partial_sum/classify) costs O(N) total.
TermSequence criterion_terms(const IndicatorKernel& kernel, CriterionKind kind,
                             int run_length = -1);

// Samples one indicator trajectory of length T. Deterministic given seed.
std::vector<std::uint8_t> simulate_chain(const IndicatorKernel& kernel,
                                         std::int64_t T, std::uint64_t seed);

// Sum over n of P(event at n | realized history before n) along a trajectory.
// This sum and the raw occurrence count are almost surely both finite or both
// infinite, which makes it a pathwise divergence diagnostic. The first k
// conditionals come from the initial distribution restricted to the realized
// prefix.
double conditional_occurrence_sum(const IndicatorKernel& kernel,
                                  const std::vector<std::uint8_t>& trajectory);

// Independent oracle for tail_union_window: enumerates every bit pattern on
// the window with at least one hit and sums their exact path probabilities
// via a constrained forward sweep. Throws BudgetError when T - n > 20.
double brute_force_window(const IndicatorKernel& kernel, std::int64_t n, std::int64_t T);

enum class DichotomyVerdict { IO_Zero, IO_One, NotApplicable, Indeterminate };

std::string to_string(DichotomyVerdict v);

struct DichotomyReport {
  DichotomyVerdict verdict = DichotomyVerdict::Indeterminate;
  SeriesVerdict series;  // classification of the criterion series, when run
  std::string note;
};

// Maps the convergence class of the chosen criterion series to the
// zero/one occurrence verdict. Reports NotApplicable when the sampled
// marginals P(event at n) do not tend to zero, in which case the occurrence
// probability is positive and the series criterion is silent.
DichotomyReport occurrence_dichotomy(const IndicatorKernel& kernel, CriterionKind kind,
                                     const ClassifyBudget& budget = {});

}  // namespace bcmc
