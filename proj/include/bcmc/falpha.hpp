#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "bcmc/distributions.hpp"
#include "bcmc/markov.hpp"
#include "bcmc/series.hpp"

namespace bcmc {

// Per-draw exponent sequence for independent variables X_n ~ F^(alpha_n).
// Structured families keep an exact log-domain evaluator so values like
// n^(2n) stay usable after they overflow double range.
enum class ExponentFamily { Constant, Power, SuperExponential, OnePlusInverse, Table };

struct ExponentSequence {
  ExponentFamily family = ExponentFamily::Constant;
  double param = 1.0;          // Constant: value; Power: c in n^c; OnePlusInverse: g in g(1+1/n)
  std::vector<double> table;   // Table family only

  double alpha_at(std::int64_t n) const;      // may be +inf when the value overflows
  double log_alpha_at(std::int64_t n) const;  // always finite
  // Largest valid index (INT64_MAX for the analytic families).
  std::int64_t max_index() const;
};

ExponentSequence constant_exponents(double value);
ExponentSequence power_exponents(double c);             // alpha_n = n^c
ExponentSequence superexponential_exponents();          // alpha_n = n^(2n)
ExponentSequence one_plus_inverse_exponents(double g);  // alpha_n = g(1+1/n)
ExponentSequence table_exponents(std::vector<double> values);

// Running sums S_n = alpha_1 + ... + alpha_n, kept in linear (compensated)
// and log (streaming log-sum-exp) form. Memoized behind a mutex with periodic
// checkpoints, so shared use across threads and non-monotone access are both
// cheap.
class CumulativeExponent {
 public:
  explicit CumulativeExponent(ExponentSequence seq);
  double value(std::int64_t n) const;      // S_n; +inf once the sum overflows
  double log_value(std::int64_t n) const;  // log S_n, always finite
  const ExponentSequence& exponents() const { return seq_; }

 private:
  struct Point {
    std::int64_t n = 0;
    double sum = 0.0;
    double comp = 0.0;
    double log_sum = 0.0;
  };
  void advance_locked(std::int64_t n) const;

  ExponentSequence seq_;
  mutable std::mutex mx_;
  mutable Point cur_;
  mutable std::vector<Point> checkpoints_;
};

enum class MaximaSeriesKind {
  ThresholdMass,        // F^(S_n)(x_n) = P(running max at n is below threshold)
  ThresholdMassEscape,  // F^(S_n)(x_n) * (1 - F^(alpha_{n+1})(x_{n+1}))
  CumulativeRatio,      // S_n / S_{n+1}
  ExponentShare,        // alpha_n / S_n
};

// Base distribution, exponents, and a nondecreasing threshold sequence for
// the events {M_n <= x_n}. first_index is where thresholds become meaningful;
// threshold_at is clamped (constant) below it. declared carries analytically
// known convergence classes for the built-in families.
struct MaximaScenario {
  UnivariateModel base;
  ExponentSequence exponents;
  std::function<double(std::int64_t)> threshold_at;
  std::int64_t first_index = 1;
  std::shared_ptr<CumulativeExponent> cumulative;
  std::map<MaximaSeriesKind, DeclaredClass> declared;
};

// Validates inputs (thresholds nondecreasing on a probe grid) and installs
// the shared cumulative-exponent memo plus declared classes derivable from
// the exponent family alone.
MaximaScenario make_maxima_scenario(UnivariateModel base, ExponentSequence exponents,
                                    std::function<double(std::int64_t)> threshold_at,
                                    std::int64_t first_index = 1);

// Uniform base, alpha_n = g(1+1/n), x_n = 1 - log(log(n))/n. The thresholds
// decrease until n = 6 and increase afterwards, so the scenario starts at 6
// with the earlier values clamped to x_6. The escape series changes class at
// g = 1; both threshold series carry declared classes.
MaximaScenario loglog_threshold_scenario(double g);

double cumulative_exponent(const MaximaScenario& s, std::int64_t n);      // S_n
double log_cumulative_exponent(const MaximaScenario& s, std::int64_t n);  // log S_n

// P(M_n <= x_n) = F(x_n)^(S_n), evaluated through logs so huge S_n and tiny
// probabilities survive.
double prob_max_leq(const MaximaScenario& s, std::int64_t n);
double log_prob_max_leq(const MaximaScenario& s, std::int64_t n);

// Whether series builders enforce the asymptotic hypotheses a criterion
// needs (probed at a fixed large index) or skip the probe for boundary
// studies where the hypothesis knowingly fails.
enum class HypothesisPolicy { Enforce, Skip };

// Summand generator for the requested kind, log-domain capable, with
// declared classes attached when the scenario knows them. Under Enforce,
// CumulativeRatio requires alpha_n -> inf and S_n/S_{n+1} -> 0, and
// ExponentShare requires alpha_n/S_n -> 0; violations throw HypothesisError.
TermSequence maxima_series_terms(const MaximaScenario& s, MaximaSeriesKind kind,
                                 HypothesisPolicy policy = HypothesisPolicy::Enforce);

struct NewcomerEventProbs {
  double prior_max_wins = 0.0;           // P(newcomer at n is not the running max)
  double then_newcomer_wins_next = 0.0;  // P(of that AND newcomer at n+1 is the max)
};

// Closed forms S_{n-1}/S_n and (alpha_{n+1}/S_{n+1})(S_{n-1}/S_n); n >= 2.
NewcomerEventProbs exact_event_probs(const MaximaScenario& s, std::int64_t n);

// Order-1 law of the events A_n = {M_n <= x_n}, indexed from 1 at the
// scenario's first_index. Throws DegenerateWindowError where P(A_n) = 1 would
// make the complement-conditional undefined.
IndicatorKernel maxima_event_kernel(const MaximaScenario& s);

struct SchemeStep {
  std::int64_t n = 0;            // scenario index
  double x = 0.0;                // newcomer draw
  double running_max = 0.0;      // max of draws 1..n
  bool below_threshold = false;  // running max <= x_n
  bool prior_max_wins = false;   // newcomer strictly below the prior running max
  bool tie = false;              // newcomer equals the prior running max exactly
};

struct SchemeSummary {
  std::int64_t tie_count = 0;
};

// One replication of the scheme over indices 1..T, visiting every step.
// Ties count the newcomer as the running max and are tallied.
SchemeSummary simulate_scheme(const MaximaScenario& s, std::int64_t T, std::uint64_t seed,
                              const std::function<void(const SchemeStep&)>& visit);

// Empirical probe of the order-1 property of the below-threshold indicators:
// conditional hit frequencies at n+1 given the states at n and n-1, next to
// the kernel's one-step value.
struct OrderDiagnostic {
  double freq_given_hit_hit = 0.0;   // f(A_{n+1} | A_n, A_{n-1})
  double freq_given_hit_miss = 0.0;  // f(A_{n+1} | A_n, not A_{n-1})
  double kernel_value = 0.0;         // P(A_{n+1} | A_n) from the kernel
  std::int64_t count_hit_hit = 0;
  std::int64_t count_hit_miss = 0;
};

OrderDiagnostic order1_diagnostic(const MaximaScenario& s, std::int64_t n,
                                  std::int64_t replications, std::uint64_t seed);

}  // namespace bcmc
