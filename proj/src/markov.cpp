#include "bcmc/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "bcmc/errors.hpp"
#include "bcmc/rng.hpp"

namespace bcmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Conditioning events thinner than this are treated as impossible.
constexpr double kConditionFloor = 1e-300;

double lookup(const IndicatorKernel& k, std::int64_t n, unsigned h) {
  const double p = k.transition(n, h);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConsistencyError("transition probability outside [0,1] at index " +
                           std::to_string(n));
  }
  return p;
}

struct Acc {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double total() const { return sum + comp; }
};

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Forward distribution over the 2^k histories, advanced one index at a time.
// Restarting from the initial distribution is always legal, so a cursor can
// be reused across calls with nondecreasing target indices at O(1) per index.
struct Forward {
  std::shared_ptr<const IndicatorKernel> kernel;
  std::int64_t t = 0;
  std::vector<double> probs;

  explicit Forward(std::shared_ptr<const IndicatorKernel> k) : kernel(std::move(k)) {
    reset();
  }

  void reset() {
    t = kernel->order;
    probs = kernel->initial_dist;
  }

  void step() {
    const unsigned mask = (1u << kernel->order) - 1u;
    std::vector<double> next(probs.size(), 0.0);
    for (unsigned h = 0; h < probs.size(); ++h) {
      const double w = probs[h];
      if (w == 0.0) continue;
      const double p = lookup(*kernel, t, h);
      next[((h << 1) | 1u) & mask] += w * p;
      next[(h << 1) & mask] += w * (1.0 - p);
    }
    probs.swap(next);
    ++t;
  }

  void advance_to(std::int64_t target) {
    if (target < kernel->order) {
      throw std::domain_error("forward recursion undefined before the initial block");
    }
    if (target < t) reset();
    while (t < target) step();
  }

  double marginal() const {
    double m = 0.0;
    for (unsigned h = 0; h < probs.size(); ++h) {
      if (h & 1u) m += probs[h];
    }
    return m;
  }
};

int bit_at_time(unsigned h, int order, std::int64_t j) {
  return (int)((h >> (order - j)) & 1u);
}

// P(indicators on [n, n + bits.size() - 1] equal bits), linear domain.
// Constraints inside the initial block are applied by masking the initial
// distribution; later ones by forcing the transition step.
double pattern_mass(Forward& fwd, std::int64_t n, const std::vector<int>& bits) {
  const IndicatorKernel& k = *fwd.kernel;
  const int ord = k.order;
  const unsigned mask = (1u << ord) - 1u;
  const std::int64_t last = n + (std::int64_t)bits.size() - 1;
  std::vector<double> cur;
  std::int64_t t;
  if (n > ord) {
    fwd.advance_to(n - 1);
    cur = fwd.probs;
    t = n - 1;
  } else {
    cur = k.initial_dist;
    t = ord;
    for (std::int64_t j = n; j <= std::min<std::int64_t>(ord, last); ++j) {
      const int want = bits[(size_t)(j - n)];
      for (unsigned h = 0; h < cur.size(); ++h) {
        if (bit_at_time(h, ord, j) != want) cur[h] = 0.0;
      }
    }
  }
  std::vector<double> next(cur.size());
  for (std::int64_t u = t + 1; u <= last; ++u) {
    const int want = bits[(size_t)(u - n)];
    std::fill(next.begin(), next.end(), 0.0);
    for (unsigned h = 0; h < cur.size(); ++h) {
      const double w = cur[h];
      if (w == 0.0) continue;
      const double p = lookup(k, u - 1, h);
      const double f = want ? p : 1.0 - p;
      if (f == 0.0) continue;
      next[((h << 1) | (unsigned)want) & mask] += w * f;
    }
    cur.swap(next);
  }
  Acc acc;
  for (double w : cur) acc.add(w);
  return acc.total();
}

// Same walk in log domain; survives windows whose clear probability
// underflows as a product.
double log_pattern_mass(Forward& fwd, std::int64_t n, const std::vector<int>& bits) {
  const IndicatorKernel& k = *fwd.kernel;
  const int ord = k.order;
  const unsigned mask = (1u << ord) - 1u;
  const std::int64_t last = n + (std::int64_t)bits.size() - 1;
  std::vector<double> cur;
  std::int64_t t;
  auto log_of = [](double w) { return w > 0.0 ? std::log(w) : -kInf; };
  if (n > ord) {
    fwd.advance_to(n - 1);
    cur.resize(fwd.probs.size());
    for (size_t h = 0; h < cur.size(); ++h) cur[h] = log_of(fwd.probs[h]);
    t = n - 1;
  } else {
    cur.resize(k.initial_dist.size());
    for (size_t h = 0; h < cur.size(); ++h) cur[h] = log_of(k.initial_dist[h]);
    t = ord;
    for (std::int64_t j = n; j <= std::min<std::int64_t>(ord, last); ++j) {
      const int want = bits[(size_t)(j - n)];
      for (unsigned h = 0; h < cur.size(); ++h) {
        if (bit_at_time(h, ord, j) != want) cur[h] = -kInf;
      }
    }
  }
  std::vector<double> next(cur.size());
  for (std::int64_t u = t + 1; u <= last; ++u) {
    const int want = bits[(size_t)(u - n)];
    std::fill(next.begin(), next.end(), -kInf);
    for (unsigned h = 0; h < cur.size(); ++h) {
      const double w = cur[h];
      if (w == -kInf) continue;
      const double p = lookup(k, u - 1, h);
      const double lf = want ? std::log(p) : std::log1p(-p);
      if (lf == -kInf) continue;
      const unsigned h2 = ((h << 1) | (unsigned)want) & mask;
      next[h2] = log_add(next[h2], w + lf);
    }
    cur.swap(next);
  }
  double out = -kInf;
  for (double w : cur) out = log_add(out, w);
  return out;
}

std::shared_ptr<const IndicatorKernel> shared_copy(const IndicatorKernel& kernel) {
  return std::make_shared<const IndicatorKernel>(kernel);
}

}  // namespace

IndicatorKernel make_order1(std::function<double(std::int64_t)> stay,
                            std::function<double(std::int64_t)> enter,
                            double first_prob, std::int64_t safe_start_index) {
  if (!stay || !enter) throw ConfigError("make_order1 needs both conditional maps");
  if (!(first_prob >= 0.0 && first_prob <= 1.0)) {
    throw ConfigError("make_order1: first_prob must lie in [0,1]");
  }
  IndicatorKernel k;
  k.order = 1;
  k.transition = [stay = std::move(stay), enter = std::move(enter)](std::int64_t n,
                                                                    unsigned h) {
    return (h & 1u) ? stay(n) : enter(n);
  };
  k.initial_dist = {1.0 - first_prob, first_prob};
  k.safe_start_index = safe_start_index;
  return k;
}

void validate(const IndicatorKernel& kernel) {
  if (kernel.order < 1 || kernel.order > 16) {
    throw ConfigError("kernel order must lie in [1,16]");
  }
  if (!kernel.transition) throw ConfigError("kernel has no transition map");
  if (kernel.initial_dist.size() != (size_t(1) << kernel.order)) {
    throw ConfigError("initial distribution must have 2^order entries");
  }
  double s = 0.0;
  for (double w : kernel.initial_dist) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw ConfigError("initial distribution entries must lie in [0,1]");
    }
    s += w;
  }
  if (std::abs(s - 1.0) > 1e-12) throw ConfigError("initial distribution must sum to 1");
  if (kernel.safe_start_index < 1) throw ConfigError("safe_start_index must be >= 1");
}

ChainMarginals forward_marginals(const IndicatorKernel& kernel, std::int64_t n) {
  validate(kernel);
  if (n < kernel.order) {
    throw std::domain_error("forward_marginals requires n >= kernel order");
  }
  Forward fwd(shared_copy(kernel));
  fwd.advance_to(n);
  ChainMarginals out;
  out.index = n;
  out.state_probs = fwd.probs;
  out.marginal = fwd.marginal();
  return out;
}

double tail_union_window(const IndicatorKernel& kernel, std::int64_t n, std::int64_t T) {
  validate(kernel);
  if (n < kernel.order || T < n) {
    throw std::domain_error("window must satisfy order <= n <= T");
  }
  if (n < kernel.safe_start_index) {
    throw std::domain_error("window starts before safe_start_index");
  }
  Forward fwd(shared_copy(kernel));
  const std::vector<int> zeros((size_t)(T - n + 1), 0);
  const double log_clear = log_pattern_mass(fwd, n, zeros);
  if (log_clear == -kInf) {
    throw DegenerateWindowError("some index in [" + std::to_string(n) + "," +
                                std::to_string(T) + "] is a certain event");
  }
  return -std::expm1(log_clear);
}

TermSequence criterion_terms(const IndicatorKernel& kernel, CriterionKind kind,
                             int run_length) {
  validate(kernel);
  const bool two_term = kind == CriterionKind::HitAfterClear ||
                        kind == CriterionKind::ClearThenHit ||
                        kind == CriterionKind::HitThenClear;
  if (two_term) {
    if (kernel.order != 1) {
      throw ConfigError("two-term criterion kinds need an order-1 kernel");
    }
    if (run_length >= 0) {
      throw ConfigError("run_length applies only to the zero-run kinds");
    }
  }
  int m = run_length < 0 ? kernel.order : run_length;
  if (kind == CriterionKind::HitAfterZeroRun && m < 1) {
    throw ConfigError("conditional zero-run kind needs run_length >= 1");
  }

  auto shared = shared_copy(kernel);
  auto mx = std::make_shared<std::mutex>();
  auto fwd = std::make_shared<Forward>(shared);
  auto lfwd = std::make_shared<Forward>(shared);

  const bool conditional =
      kind == CriterionKind::HitAfterClear || kind == CriterionKind::HitAfterZeroRun;

  TermSequence seq;
  seq.first_index = conditional ? std::max<std::int64_t>(1, kernel.safe_start_index) : 1;

  seq.term_at = [shared, fwd, mx, kind, m](std::int64_t n) -> double {
    std::lock_guard<std::mutex> guard(*mx);
    switch (kind) {
      case CriterionKind::HitAfterClear: {
        fwd->advance_to(n);
        const double clear = 1.0 - fwd->marginal();
        if (!(clear >= kConditionFloor)) {
          throw UndefinedTermError("conditioning event vanishes at index " +
                                   std::to_string(n));
        }
        return lookup(*shared, n, 0u);
      }
      case CriterionKind::ClearThenHit: {
        fwd->advance_to(n);
        return (1.0 - fwd->marginal()) * lookup(*shared, n, 0u);
      }
      case CriterionKind::HitThenClear: {
        fwd->advance_to(n);
        return fwd->marginal() * (1.0 - lookup(*shared, n, 1u));
      }
      case CriterionKind::ZeroRunThenHit: {
        std::vector<int> bits((size_t)m, 0);
        bits.push_back(1);
        return pattern_mass(*fwd, n, bits);
      }
      case CriterionKind::HitAfterZeroRun: {
        const std::vector<int> run((size_t)m, 0);
        const double denom = pattern_mass(*fwd, n, run);
        if (!(denom >= kConditionFloor)) {
          throw UndefinedTermError("zero-run conditioning vanishes at index " +
                                   std::to_string(n));
        }
        std::vector<int> bits = run;
        bits.push_back(1);
        return pattern_mass(*fwd, n, bits) / denom;
      }
    }
    throw ConsistencyError("unreachable criterion kind");
  };

  seq.log_term_at = [shared, lfwd, mx, kind, m](std::int64_t n) -> double {
    std::lock_guard<std::mutex> guard(*mx);
    switch (kind) {
      case CriterionKind::HitAfterClear: {
        const double log_clear = log_pattern_mass(*lfwd, n, {0});
        if (!(log_clear >= std::log(kConditionFloor))) {
          throw UndefinedTermError("conditioning event vanishes at index " +
                                   std::to_string(n));
        }
        return std::log(lookup(*shared, n, 0u));
      }
      case CriterionKind::ClearThenHit: {
        return log_pattern_mass(*lfwd, n, {0}) + std::log(lookup(*shared, n, 0u));
      }
      case CriterionKind::HitThenClear: {
        return log_pattern_mass(*lfwd, n, {1}) + std::log1p(-lookup(*shared, n, 1u));
      }
      case CriterionKind::ZeroRunThenHit: {
        std::vector<int> bits((size_t)m, 0);
        bits.push_back(1);
        return log_pattern_mass(*lfwd, n, bits);
      }
      case CriterionKind::HitAfterZeroRun: {
        const std::vector<int> run((size_t)m, 0);
        const double log_denom = log_pattern_mass(*lfwd, n, run);
        if (!(log_denom >= std::log(kConditionFloor))) {
          throw UndefinedTermError("zero-run conditioning vanishes at index " +
                                   std::to_string(n));
        }
        std::vector<int> bits = run;
        bits.push_back(1);
        return log_pattern_mass(*lfwd, n, bits) - log_denom;
      }
    }
    throw ConsistencyError("unreachable criterion kind");
  };

  return seq;
}

std::vector<std::uint8_t> simulate_chain(const IndicatorKernel& kernel, std::int64_t T,
                                         std::uint64_t seed) {
  validate(kernel);
  if (T < kernel.order) throw std::domain_error("trajectory shorter than kernel order");
  const int ord = kernel.order;
  const unsigned mask = (1u << ord) - 1u;
  Rng rng(seed);
  std::vector<std::uint8_t> out((size_t)T, 0);

  const double u = rng.uniform01();
  double acc = 0.0;
  unsigned start = (unsigned)kernel.initial_dist.size() - 1u;
  for (unsigned h = 0; h < kernel.initial_dist.size(); ++h) {
    acc += kernel.initial_dist[h];
    if (u <= acc) {
      start = h;
      break;
    }
  }
  for (std::int64_t j = 1; j <= ord; ++j) {
    out[(size_t)(j - 1)] = (std::uint8_t)bit_at_time(start, ord, j);
  }
  unsigned h = start;
  for (std::int64_t t = ord; t < T; ++t) {
    const double p = lookup(kernel, t, h);
    const std::uint8_t bit = rng.bernoulli(p) ? 1 : 0;
    out[(size_t)t] = bit;
    h = ((h << 1) | bit) & mask;
  }
  return out;
}

double conditional_occurrence_sum(const IndicatorKernel& kernel,
                                  const std::vector<std::uint8_t>& trajectory) {
  validate(kernel);
  const int ord = kernel.order;
  const std::int64_t T = (std::int64_t)trajectory.size();
  if (T < ord) throw ConfigError("trajectory shorter than kernel order");
  const unsigned mask = (1u << ord) - 1u;
  Acc acc;
  for (std::int64_t j = 1; j <= ord; ++j) {
    double num = 0.0, den = 0.0;
    for (unsigned h = 0; h < kernel.initial_dist.size(); ++h) {
      bool match = true;
      for (std::int64_t i = 1; i < j; ++i) {
        if (bit_at_time(h, ord, i) != (int)trajectory[(size_t)(i - 1)]) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      den += kernel.initial_dist[h];
      if (bit_at_time(h, ord, j) == 1) num += kernel.initial_dist[h];
    }
    if (!(den > 0.0)) {
      throw ConsistencyError("trajectory prefix impossible under the initial distribution");
    }
    acc.add(num / den);
  }
  unsigned h = 0;
  for (std::int64_t j = 1; j <= ord; ++j) {
    h = (h << 1) | (unsigned)trajectory[(size_t)(j - 1)];
  }
  for (std::int64_t t = ord; t < T; ++t) {
    acc.add(lookup(kernel, t, h));
    h = ((h << 1) | (unsigned)trajectory[(size_t)t]) & mask;
  }
  return acc.total();
}

double brute_force_window(const IndicatorKernel& kernel, std::int64_t n, std::int64_t T) {
  validate(kernel);
  if (n < kernel.order || T < n) {
    throw std::domain_error("window must satisfy order <= n <= T");
  }
  if (T - n > 20) throw BudgetError("enumeration window wider than 21 indices");
  const int W = (int)(T - n + 1);
  Forward fwd(shared_copy(kernel));
  Acc acc;
  std::vector<int> bits((size_t)W, 0);
  for (std::uint64_t pat = 1; pat < (std::uint64_t(1) << W); ++pat) {
    for (int i = 0; i < W; ++i) bits[(size_t)i] = (int)((pat >> i) & 1u);
    acc.add(pattern_mass(fwd, n, bits));
  }
  return acc.total();
}

std::string to_string(DichotomyVerdict v) {
  switch (v) {
    case DichotomyVerdict::IO_Zero: return "IO_Zero";
    case DichotomyVerdict::IO_One: return "IO_One";
    case DichotomyVerdict::NotApplicable: return "NotApplicable";
    case DichotomyVerdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

DichotomyReport occurrence_dichotomy(const IndicatorKernel& kernel, CriterionKind kind,
                                     const ClassifyBudget& budget) {
  validate(kernel);
  DichotomyReport rep;

  // The series criteria only speak when the per-index probabilities vanish;
  // otherwise occurrence keeps positive probability at every horizon.
  Forward fwd(shared_copy(kernel));
  std::vector<double> sampled;
  double next_target = (double)kernel.order;
  while (true) {
    const std::int64_t idx = (std::int64_t)std::ceil(next_target);
    if (idx > budget.max_index) break;
    fwd.advance_to(idx);
    sampled.push_back(fwd.marginal());
    next_target = std::max(next_target * budget.schedule_factor, next_target + 1.0);
  }
  const size_t tail = sampled.size() > 10 ? sampled.size() - 10 : 0;
  double tail_max = 0.0;
  for (size_t i = tail; i < sampled.size(); ++i) tail_max = std::max(tail_max, sampled[i]);
  if (tail_max > 1e-3) {
    rep.verdict = DichotomyVerdict::NotApplicable;
    rep.note = "per-index probabilities do not vanish (max of last sampled = " +
               std::to_string(tail_max) + ")";
    return rep;
  }

  rep.series = classify(criterion_terms(kernel, kind), budget);
  switch (rep.series.verdict) {
    case SeriesClass::Convergent: rep.verdict = DichotomyVerdict::IO_Zero; break;
    case SeriesClass::Divergent: rep.verdict = DichotomyVerdict::IO_One; break;
    case SeriesClass::Indeterminate: rep.verdict = DichotomyVerdict::Indeterminate; break;
  }
  rep.note = std::string("criterion series ") + to_string(rep.series.verdict);
  return rep;
}

}  // namespace bcmc
