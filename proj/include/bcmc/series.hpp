#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bcmc {

enum class SeriesClass { Convergent, Divergent, Indeterminate };

const char* to_string(SeriesClass c);

// Analytically known classification attached to a term sequence, with a note on the
// derivation. It overrides the numeric heuristic in classify() and is reported as such.
struct DeclaredClass {
  SeriesClass value = SeriesClass::Indeterminate;
  std::string note;
};

// Nonnegative term sequence t_n defined for n >= first_index.
// log_term_at is optional; where both are finite it must equal log(term_at(n)).
// It keeps tails usable after t_n underflows the linear double range.
struct TermSequence {
  std::int64_t first_index = 1;
  std::function<double(std::int64_t)> term_at;
  std::function<double(std::int64_t)> log_term_at;  // may be empty
  std::optional<DeclaredClass> exact_class;
};

struct ClassifyBudget {
  std::int64_t max_index = 1000000;        // largest sampled index
  double schedule_factor = 1.25;           // geometric sampling schedule
  std::int64_t partial_sum_horizon = 10000;  // checkpoint partial sums up to min(this, max_index)
};

// Fitted decay model t_n ~ C * n^-p * (log n)^-q * (log log n)^r.
struct ExponentFit {
  bool valid = false;
  double p = 0, q = 0, r = 0;
};

struct SeriesVerdict {
  SeriesClass verdict = SeriesClass::Indeterminate;
  ExponentFit fit;
  std::vector<std::pair<std::int64_t, double>> partial_sums;  // nondecreasing checkpoints
  std::vector<std::pair<std::string, std::string>> tests_applied;  // (test, vote/diagnostic)
};

// Compensated (Neumaier) partial sum of t_n for n in [first_index, N]. If every term
// underflows to zero in the linear domain but log terms are available, the log-domain
// accumulation below is used instead.
double partial_sum(const TermSequence& seq, std::int64_t N);

// log of the partial sum, accumulated by streaming log-sum-exp. -inf when all terms vanish.
double log_partial_sum(const TermSequence& seq, std::int64_t N);

// Numeric convergence/divergence heuristic:
//   1. a declared exact_class wins and is reported as declared;
//   2. if the sampled tail does not vanish (max of the last 10 sampled terms > 1e-8 and the
//      second half of those holds more than half the first half's max): Divergent;
//   3. otherwise classify by the fitted (p, q, r) with boundary width delta = 0.05:
//      p > 1+d Convergent; p < 1-d Divergent; at p ~ 1 fall through to q, then to r
//      (r < -1-d Convergent, r > -1+d Divergent), else Indeterminate.
// Sequences that sample identically zero are Convergent. Too few usable points for the
// regression yields Indeterminate with a diagnostic entry.
SeriesVerdict classify(const TermSequence& seq, const ClassifyBudget& budget = {});

}  // namespace bcmc
