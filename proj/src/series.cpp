#include "bcmc/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bcmc {

namespace {

constexpr double kTailFloor = 1e-8;     // tail must sit above this for the non-vanishing vote to fire
constexpr double kDecayCeiling = 0.5;   // ... and must have stopped shrinking across the tail window
constexpr double kDelta = 0.05;         // boundary width for the exponent rules
constexpr int kMinFitPoints = 8;

double checked_term(const TermSequence& seq, std::int64_t n) {
  const double t = seq.term_at(n);
  if (std::isnan(t) || t < 0.0 || t == std::numeric_limits<double>::infinity())
    throw std::domain_error("term sequence produced a negative or non-finite term");
  return t;
}

double log_term(const TermSequence& seq, std::int64_t n) {
  if (seq.log_term_at) {
    const double lt = seq.log_term_at(n);
    if (std::isnan(lt) || lt == std::numeric_limits<double>::infinity())
      throw std::domain_error("term sequence produced a non-finite log term");
    return lt;
  }
  return std::log(checked_term(seq, n));
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

std::vector<std::int64_t> sample_schedule(std::int64_t first, const ClassifyBudget& budget) {
  std::vector<std::int64_t> ns;
  double step = static_cast<double>(first);
  for (;;) {
    const auto n = static_cast<std::int64_t>(std::ceil(step));
    if (n > budget.max_index) break;
    if (ns.empty() || n > ns.back()) ns.push_back(n);
    step *= budget.schedule_factor;
    if (!std::isfinite(step)) break;
  }
  return ns;
}

// Least squares for log t = c - p log n - q loglog n + r logloglog n.
// Normal equations, 4x4 Gaussian elimination with partial pivoting.
bool fit_exponents(const std::vector<std::int64_t>& ns, const std::vector<double>& logt,
                   ExponentFit& out) {
  double ata[4][4] = {};
  double aty[4] = {};
  int used = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double n = static_cast<double>(ns[i]);
    if (n < 16.0 || !std::isfinite(logt[i])) continue;
    const double x1 = std::log(n);
    const double x2 = std::log(x1);
    const double x3 = std::log(x2);
    const double row[4] = {1.0, -x1, -x2, x3};
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) ata[a][b] += row[a] * row[b];
      aty[a] += row[a] * logt[i];
    }
    ++used;
  }
  if (used < kMinFitPoints) return false;

  double m[4][5];
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) m[a][b] = ata[a][b];
    m[a][4] = aty[a];
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int rr = col + 1; rr < 4; ++rr)
      if (std::abs(m[rr][col]) > std::abs(m[piv][col])) piv = rr;
    if (std::abs(m[piv][col]) < 1e-12) return false;
    if (piv != col)
      for (int b = col; b < 5; ++b) std::swap(m[piv][b], m[col][b]);
    for (int rr = 0; rr < 4; ++rr) {
      if (rr == col) continue;
      const double f = m[rr][col] / m[col][col];
      for (int b = col; b < 5; ++b) m[rr][b] -= f * m[col][b];
    }
  }
  const double c = m[0][4] / m[0][0];
  out.p = m[1][4] / m[1][1];
  out.q = m[2][4] / m[2][2];
  out.r = m[3][4] / m[3][3];
  out.valid = std::isfinite(c) && std::isfinite(out.p) && std::isfinite(out.q) && std::isfinite(out.r);
  return out.valid;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

const char* to_string(SeriesClass c) {
  switch (c) {
    case SeriesClass::Convergent: return "Convergent";
    case SeriesClass::Divergent: return "Divergent";
    default: return "Indeterminate";
  }
}

double partial_sum(const TermSequence& seq, std::int64_t N) {
  if (!seq.term_at) throw std::domain_error("term sequence has no term function");
  if (N < seq.first_index) throw std::domain_error("partial sum upper index below first_index");
  double sum = 0.0, comp = 0.0;
  for (std::int64_t n = seq.first_index; n <= N; ++n) {
    const double t = checked_term(seq, n);
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t))
      comp += (sum - s) + t;
    else
      comp += (t - s) + sum;
    sum = s;
  }
  double total = sum + comp;
  if (total == 0.0 && seq.log_term_at) {
    // every term underflowed; recover what the log domain still resolves
    total = std::exp(log_partial_sum(seq, N));
  }
  return total;
}

double log_partial_sum(const TermSequence& seq, std::int64_t N) {
  if (!seq.term_at && !seq.log_term_at)
    throw std::domain_error("term sequence has no term function");
  if (N < seq.first_index) throw std::domain_error("partial sum upper index below first_index");
  double lse = -std::numeric_limits<double>::infinity();
  for (std::int64_t n = seq.first_index; n <= N; ++n) lse = log_add_exp(lse, log_term(seq, n));
  return lse;
}

SeriesVerdict classify(const TermSequence& seq, const ClassifyBudget& budget) {
  if (!seq.term_at) throw std::domain_error("term sequence has no term function");
  if (budget.max_index < seq.first_index)
    throw std::domain_error("classification budget below first_index");

  SeriesVerdict out;
  const auto ns = sample_schedule(seq.first_index, budget);
  std::vector<double> terms(ns.size()), logt(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    terms[i] = checked_term(seq, ns[i]);
    logt[i] = (terms[i] > 0.0 || seq.log_term_at) ? log_term(seq, ns[i])
                                                  : -std::numeric_limits<double>::infinity();
  }

  // partial-sum checkpoints at decades (diagnostic only)
  {
    const std::int64_t horizon = std::min(budget.partial_sum_horizon, budget.max_index);
    double sum = 0.0, comp = 0.0;
    std::int64_t next_cp = 10;
    while (next_cp < seq.first_index) next_cp *= 10;
    for (std::int64_t n = seq.first_index; n <= horizon; ++n) {
      const double t = checked_term(seq, n);
      const double s = sum + t;
      if (std::abs(sum) >= std::abs(t))
        comp += (sum - s) + t;
      else
        comp += (t - s) + sum;
      sum = s;
      if (n == next_cp || n == horizon) {
        out.partial_sums.emplace_back(n, sum + comp);
        while (next_cp <= n) next_cp *= 10;
      }
    }
  }

  // vote 1: sampled tail must vanish for convergence to be possible. A bare
  // floor cannot tell "still decaying, just slowly" from "settled above
  // zero" at any finite horizon, so the vote fires only when the tail also
  // stopped shrinking: the largest term in the last half of the tail window
  // holds more than half of the largest in the first half.
  double tail_max = 0.0;
  const std::size_t tail_n = std::min<std::size_t>(10, ns.size());
  for (std::size_t i = ns.size() - tail_n; i < ns.size(); ++i) tail_max = std::max(tail_max, terms[i]);
  double tail_decay = terms.back() > 0.0 ? 1.0 : 0.0;
  if (const std::size_t half = tail_n / 2; half > 0) {
    double head_max = 0.0, end_max = 0.0;
    for (std::size_t i = ns.size() - tail_n; i < ns.size() - tail_n + half; ++i)
      head_max = std::max(head_max, terms[i]);
    for (std::size_t i = ns.size() - half; i < ns.size(); ++i)
      end_max = std::max(end_max, terms[i]);
    tail_decay = head_max > 0.0 ? end_max / head_max : (end_max > 0.0 ? 1.0 : 0.0);
  }
  const bool tail_alive = tail_max > kTailFloor && tail_decay > kDecayCeiling;
  out.tests_applied.emplace_back("tail_floor",
                                 "max(last sampled terms)=" + fmt(tail_max) + " decay=" + fmt(tail_decay) +
                                     (tail_alive ? ": Divergent" : ": vanishes"));

  const bool all_zero = std::all_of(terms.begin(), terms.end(), [](double t) { return t == 0.0; });
  if (all_zero)
    out.tests_applied.emplace_back("all_zero", "every sampled term is zero: Convergent");

  // vote 2: exponent fit
  SeriesClass fit_vote = SeriesClass::Indeterminate;
  if (!all_zero && fit_exponents(ns, logt, out.fit)) {
    const double p = out.fit.p, q = out.fit.q, r = out.fit.r;
    if (p > 1.0 + kDelta)
      fit_vote = SeriesClass::Convergent;
    else if (p < 1.0 - kDelta)
      fit_vote = SeriesClass::Divergent;
    else if (q > 1.0 + kDelta)
      fit_vote = SeriesClass::Convergent;
    else if (q < 1.0 - kDelta)
      fit_vote = SeriesClass::Divergent;
    else if (r < -1.0 - kDelta)
      fit_vote = SeriesClass::Convergent;
    else if (r > -1.0 + kDelta)
      fit_vote = SeriesClass::Divergent;
    out.tests_applied.emplace_back(
        "exponent_fit", "p=" + fmt(p) + " q=" + fmt(q) + " r=" + fmt(r) + ": " + to_string(fit_vote));
  } else if (!all_zero) {
    out.tests_applied.emplace_back("exponent_fit", "too few usable points: Indeterminate");
  }

  if (all_zero)
    out.verdict = SeriesClass::Convergent;
  else if (tail_alive)
    out.verdict = SeriesClass::Divergent;
  else
    out.verdict = fit_vote;

  if (seq.exact_class) {
    out.verdict = seq.exact_class->value;
    out.tests_applied.emplace_back(
        "declared", std::string(to_string(seq.exact_class->value)) + " (" + seq.exact_class->note + ")");
  }
  return out;
}

}  // namespace bcmc
