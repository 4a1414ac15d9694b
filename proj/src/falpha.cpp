#include "bcmc/falpha.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bcmc/errors.hpp"
#include "bcmc/rng.hpp"

namespace bcmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// log F^(alpha_n)(x_n), routed through log alpha when the linear value
// overflows.
double log_alpha_power(const MaximaScenario& s, std::int64_t n) {
  const double lf = s.base.log_cdf(s.threshold_at(n));
  if (lf == 0.0) return 0.0;
  if (lf == -kInf) return -kInf;
  const double a = s.exponents.alpha_at(n);
  if (std::isfinite(a)) return a * lf;
  return -std::exp(s.exponents.log_alpha_at(n) + std::log(-lf));
}

// exp(la - lb) with a linear shortcut when both operands are representable.
double stable_ratio(double a_lin, double b_lin, double la, double lb) {
  if (std::isfinite(a_lin) && std::isfinite(b_lin) && b_lin > 0.0) return a_lin / b_lin;
  return std::exp(la - lb);
}

double power_quantile(const UnivariateModel& base, double a_lin, double la, double w) {
  double t;  // log of the quantile level handed to the base model
  if (std::isfinite(a_lin)) {
    t = std::log(w) / a_lin;
  } else {
    t = -std::exp(std::log(-std::log(w)) - la);
  }
  double u = std::exp(t);
  const double lo = std::numeric_limits<double>::denorm_min();
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  if (u < lo) u = lo;
  if (u > hi) u = hi;
  return base.quantile(u);
}

}  // namespace

double ExponentSequence::alpha_at(std::int64_t n) const {
  if (n < 1) throw std::domain_error("exponent index must be >= 1");
  switch (family) {
    case ExponentFamily::Constant:
      return param;
    case ExponentFamily::Power:
      return std::pow((double)n, param);
    case ExponentFamily::SuperExponential:
      return std::exp(2.0 * (double)n * std::log((double)n));
    case ExponentFamily::OnePlusInverse:
      return param * (1.0 + 1.0 / (double)n);
    case ExponentFamily::Table:
      if (n > (std::int64_t)table.size()) throw ConfigError("exponent table exhausted");
      return table[(size_t)(n - 1)];
  }
  throw ConsistencyError("unreachable exponent family");
}

double ExponentSequence::log_alpha_at(std::int64_t n) const {
  if (n < 1) throw std::domain_error("exponent index must be >= 1");
  switch (family) {
    case ExponentFamily::Constant:
      return std::log(param);
    case ExponentFamily::Power:
      return param * std::log((double)n);
    case ExponentFamily::SuperExponential:
      return 2.0 * (double)n * std::log((double)n);
    case ExponentFamily::OnePlusInverse:
      return std::log(param) + std::log1p(1.0 / (double)n);
    case ExponentFamily::Table:
      if (n > (std::int64_t)table.size()) throw ConfigError("exponent table exhausted");
      return std::log(table[(size_t)(n - 1)]);
  }
  throw ConsistencyError("unreachable exponent family");
}

std::int64_t ExponentSequence::max_index() const {
  if (family == ExponentFamily::Table) return (std::int64_t)table.size();
  return std::numeric_limits<std::int64_t>::max();
}

ExponentSequence constant_exponents(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("constant exponent must be positive and finite");
  }
  ExponentSequence s;
  s.family = ExponentFamily::Constant;
  s.param = value;
  return s;
}

ExponentSequence power_exponents(double c) {
  if (!std::isfinite(c)) throw ConfigError("power exponent must be finite");
  ExponentSequence s;
  s.family = ExponentFamily::Power;
  s.param = c;
  return s;
}

ExponentSequence superexponential_exponents() {
  ExponentSequence s;
  s.family = ExponentFamily::SuperExponential;
  return s;
}

ExponentSequence one_plus_inverse_exponents(double g) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw ConfigError("one-plus-inverse exponent needs a positive finite factor");
  }
  ExponentSequence s;
  s.family = ExponentFamily::OnePlusInverse;
  s.param = g;
  return s;
}

ExponentSequence table_exponents(std::vector<double> values) {
  if (values.empty()) throw ConfigError("exponent table must be nonempty");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("exponent table entries must be positive and finite");
    }
  }
  ExponentSequence s;
  s.family = ExponentFamily::Table;
  s.table = std::move(values);
  return s;
}

CumulativeExponent::CumulativeExponent(ExponentSequence seq) : seq_(std::move(seq)) {
  cur_ = Point{1, seq_.alpha_at(1), 0.0, seq_.log_alpha_at(1)};
  checkpoints_.push_back(cur_);
}

void CumulativeExponent::advance_locked(std::int64_t n) const {
  if (n < 1) throw std::domain_error("cumulative exponent needs n >= 1");
  if (n > seq_.max_index()) throw ConfigError("exponent table exhausted");
  if (n < cur_.n) {
    auto it = std::upper_bound(
        checkpoints_.begin(), checkpoints_.end(), n,
        [](std::int64_t v, const Point& p) { return v < p.n; });
    cur_ = *std::prev(it);
  }
  while (cur_.n < n) {
    const std::int64_t i = cur_.n + 1;
    const double a = seq_.alpha_at(i);
    const double t = cur_.sum + a;
    if (std::isfinite(t)) {
      if (std::abs(cur_.sum) >= std::abs(a)) {
        cur_.comp += (cur_.sum - t) + a;
      } else {
        cur_.comp += (a - t) + cur_.sum;
      }
      cur_.sum = t;
    } else {
      cur_.sum = kInf;
      cur_.comp = 0.0;
    }
    cur_.log_sum = log_add(cur_.log_sum, seq_.log_alpha_at(i));
    cur_.n = i;
    if (cur_.n % 1024 == 0 && checkpoints_.back().n < cur_.n) {
      checkpoints_.push_back(cur_);
    }
  }
}

double CumulativeExponent::value(std::int64_t n) const {
  std::lock_guard<std::mutex> guard(mx_);
  advance_locked(n);
  return cur_.sum + cur_.comp;
}

double CumulativeExponent::log_value(std::int64_t n) const {
  std::lock_guard<std::mutex> guard(mx_);
  advance_locked(n);
  return cur_.log_sum;
}

MaximaScenario make_maxima_scenario(UnivariateModel base, ExponentSequence exponents,
                                    std::function<double(std::int64_t)> threshold_at,
                                    std::int64_t first_index) {
  if (!threshold_at) throw ConfigError("scenario needs a threshold map");
  if (first_index < 1) throw ConfigError("first_index must be >= 1");
  if (!base.cdf || !base.log_cdf || !base.quantile) {
    throw ConfigError("scenario base model is incomplete");
  }
  MaximaScenario s;
  s.base = std::move(base);
  s.exponents = std::move(exponents);
  s.threshold_at = std::move(threshold_at);
  s.first_index = first_index;
  s.cumulative = std::make_shared<CumulativeExponent>(s.exponents);

  double prev = s.threshold_at(first_index);
  std::int64_t n = first_index;
  std::int64_t stride = 1;
  while (n < first_index + 1000000) {
    n += stride;
    if (n - first_index > 64) stride *= 2;
    const double x = s.threshold_at(n);
    if (x < prev - 1e-12) {
      throw ConfigError("thresholds must be nondecreasing (violated near index " +
                        std::to_string(n) + ")");
    }
    prev = std::max(prev, x);
  }

  switch (s.exponents.family) {
    case ExponentFamily::Constant:
      s.declared[MaximaSeriesKind::CumulativeRatio] =
          {SeriesClass::Divergent, "ratio terms n/(n+1) tend to 1"};
      s.declared[MaximaSeriesKind::ExponentShare] =
          {SeriesClass::Divergent, "share terms are the harmonic sequence 1/n"};
      break;
    case ExponentFamily::Power:
      s.declared[MaximaSeriesKind::CumulativeRatio] =
          {SeriesClass::Divergent, "ratio terms tend to 1 for every power exponent"};
      s.declared[MaximaSeriesKind::ExponentShare] =
          s.exponents.param < -1.0
              ? DeclaredClass{SeriesClass::Convergent,
                              "share terms ~ n^c/const with c < -1"}
              : DeclaredClass{SeriesClass::Divergent,
                              "share terms decay like 1/n or slower"};
      break;
    case ExponentFamily::SuperExponential:
      s.declared[MaximaSeriesKind::CumulativeRatio] =
          {SeriesClass::Convergent, "ratio terms shrink like exp(-2)/n^2"};
      s.declared[MaximaSeriesKind::ExponentShare] =
          {SeriesClass::Divergent, "share terms tend to 1 (the newest exponent dominates)"};
      break;
    case ExponentFamily::OnePlusInverse:
      s.declared[MaximaSeriesKind::CumulativeRatio] =
          {SeriesClass::Divergent, "ratio terms tend to 1"};
      s.declared[MaximaSeriesKind::ExponentShare] =
          {SeriesClass::Divergent, "share terms decay like 1/n"};
      break;
    case ExponentFamily::Table:
      break;
  }
  return s;
}

MaximaScenario loglog_threshold_scenario(double g) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw ConfigError("loglog threshold scenario needs a positive finite factor");
  }
  auto thr = [](std::int64_t n) {
    const double m = (double)std::max<std::int64_t>(n, 6);
    return 1.0 - std::log(std::log(m)) / m;
  };
  MaximaScenario s =
      make_maxima_scenario(uniform_01(), one_plus_inverse_exponents(g), thr, 6);
  s.declared[MaximaSeriesKind::ThresholdMass] =
      {SeriesClass::Divergent,
       "terms shrink like (log n)^-g, which no positive factor makes summable"};
  if (g > 1.0) {
    s.declared[MaximaSeriesKind::ThresholdMassEscape] =
        {SeriesClass::Convergent,
         "terms behave like g log(log n)/(n (log n)^g), summable for g > 1"};
  } else {
    s.declared[MaximaSeriesKind::ThresholdMassEscape] =
        {SeriesClass::Divergent,
         "terms behave like g log(log n)/(n (log n)^g), not summable for g <= 1"};
  }
  return s;
}

double cumulative_exponent(const MaximaScenario& s, std::int64_t n) {
  return s.cumulative->value(n);
}

double log_cumulative_exponent(const MaximaScenario& s, std::int64_t n) {
  return s.cumulative->log_value(n);
}

double log_prob_max_leq(const MaximaScenario& s, std::int64_t n) {
  if (n < 1) throw std::domain_error("prob_max_leq needs n >= 1");
  const double lf = s.base.log_cdf(s.threshold_at(n));
  if (lf == 0.0) return 0.0;
  if (lf == -kInf) return -kInf;
  const double S = s.cumulative->value(n);
  if (std::isfinite(S)) return S * lf;
  return -std::exp(s.cumulative->log_value(n) + std::log(-lf));
}

double prob_max_leq(const MaximaScenario& s, std::int64_t n) {
  return std::exp(log_prob_max_leq(s, n));
}

TermSequence maxima_series_terms(const MaximaScenario& s, MaximaSeriesKind kind,
                                 HypothesisPolicy policy) {
  const std::int64_t probe =
      std::min<std::int64_t>(1024, std::max<std::int64_t>(2, s.exponents.max_index() - 1));
  if (policy == HypothesisPolicy::Enforce) {
    if (kind == MaximaSeriesKind::CumulativeRatio) {
      const double a = s.exponents.alpha_at(probe);
      if (!(a > 50.0)) {
        throw HypothesisError(
            "cumulative-ratio criterion needs alpha_n -> inf; alpha(" +
            std::to_string(probe) + ") = " + std::to_string(a));
      }
      const double ratio =
          std::exp(s.cumulative->log_value(probe) - s.cumulative->log_value(probe + 1));
      if (!(ratio < 0.05)) {
        throw HypothesisError(
            "cumulative-ratio criterion needs S_n/S_{n+1} -> 0; ratio(" +
            std::to_string(probe) + ") = " + std::to_string(ratio));
      }
    } else if (kind == MaximaSeriesKind::ExponentShare) {
      const double share =
          std::exp(s.exponents.log_alpha_at(probe) - s.cumulative->log_value(probe));
      if (!(share < 0.05)) {
        throw HypothesisError("exponent-share criterion needs alpha_n/S_n -> 0; share(" +
                              std::to_string(probe) + ") = " + std::to_string(share));
      }
    }
  }

  TermSequence seq;
  const MaximaScenario cap = s;
  switch (kind) {
    case MaximaSeriesKind::ThresholdMass:
      seq.first_index = s.first_index;
      seq.term_at = [cap](std::int64_t n) { return prob_max_leq(cap, n); };
      seq.log_term_at = [cap](std::int64_t n) { return log_prob_max_leq(cap, n); };
      break;
    case MaximaSeriesKind::ThresholdMassEscape:
      seq.first_index = s.first_index;
      seq.term_at = [cap](std::int64_t n) {
        const double la = log_alpha_power(cap, n + 1);
        return std::exp(log_prob_max_leq(cap, n)) * (-std::expm1(la));
      };
      seq.log_term_at = [cap](std::int64_t n) {
        const double la = log_alpha_power(cap, n + 1);
        if (la == 0.0) return -kInf;
        return log_prob_max_leq(cap, n) + std::log(-std::expm1(la));
      };
      break;
    case MaximaSeriesKind::CumulativeRatio:
      seq.first_index = 1;
      seq.term_at = [cap](std::int64_t n) {
        return stable_ratio(cap.cumulative->value(n), cap.cumulative->value(n + 1),
                            cap.cumulative->log_value(n), cap.cumulative->log_value(n + 1));
      };
      seq.log_term_at = [cap](std::int64_t n) {
        return cap.cumulative->log_value(n) - cap.cumulative->log_value(n + 1);
      };
      break;
    case MaximaSeriesKind::ExponentShare:
      seq.first_index = 1;
      seq.term_at = [cap](std::int64_t n) {
        return stable_ratio(cap.exponents.alpha_at(n), cap.cumulative->value(n),
                            cap.exponents.log_alpha_at(n), cap.cumulative->log_value(n));
      };
      seq.log_term_at = [cap](std::int64_t n) {
        return cap.exponents.log_alpha_at(n) - cap.cumulative->log_value(n);
      };
      break;
  }
  auto it = s.declared.find(kind);
  if (it != s.declared.end()) seq.exact_class = it->second;
  return seq;
}

NewcomerEventProbs exact_event_probs(const MaximaScenario& s, std::int64_t n) {
  if (n < 2) throw std::domain_error("newcomer event probabilities need n >= 2");
  NewcomerEventProbs out;
  out.prior_max_wins =
      stable_ratio(s.cumulative->value(n - 1), s.cumulative->value(n),
                   s.cumulative->log_value(n - 1), s.cumulative->log_value(n));
  const double share =
      stable_ratio(s.exponents.alpha_at(n + 1), s.cumulative->value(n + 1),
                   s.exponents.log_alpha_at(n + 1), s.cumulative->log_value(n + 1));
  out.then_newcomer_wins_next = share * out.prior_max_wins;
  return out;
}

IndicatorKernel maxima_event_kernel(const MaximaScenario& s) {
  const double lp1 = log_prob_max_leq(s, s.first_index);
  if (lp1 == 0.0) {
    throw DegenerateWindowError("below-threshold event is certain at the first index");
  }
  const MaximaScenario cap = s;
  const std::int64_t off = s.first_index - 1;
  IndicatorKernel k;
  k.order = 1;
  k.initial_dist = {-std::expm1(lp1), std::exp(lp1)};
  k.safe_start_index = 1;
  k.transition = [cap, off](std::int64_t j, unsigned h) {
    const std::int64_t n = j + off;  // scenario index of the conditioning state
    const double la = log_alpha_power(cap, n + 1);
    if (h & 1u) return std::exp(la);
    const double lpn = log_prob_max_leq(cap, n);
    if (lpn == 0.0) {
      throw DegenerateWindowError("below-threshold event is certain at index " +
                                  std::to_string(n));
    }
    const double a = log_prob_max_leq(cap, n + 1);
    double num;
    if (a == -kInf) {
      num = 0.0;
    } else {
      num = std::exp(a) * (-std::expm1(lpn + la - a));
    }
    double p = num / (-std::expm1(lpn));
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
  };
  return k;
}

SchemeSummary simulate_scheme(const MaximaScenario& s, std::int64_t T, std::uint64_t seed,
                              const std::function<void(const SchemeStep&)>& visit) {
  if (T < 1) throw std::domain_error("scheme simulation needs T >= 1");
  if (!visit) throw ConfigError("scheme simulation needs a visitor");
  Rng rng(seed);
  SchemeSummary summary;
  double running = -kInf;
  for (std::int64_t n = 1; n <= T; ++n) {
    const double w = rng.uniform01();
    const double x = power_quantile(s.base, s.exponents.alpha_at(n),
                                    s.exponents.log_alpha_at(n), w);
    SchemeStep st;
    st.n = n;
    st.x = x;
    st.tie = n > 1 && x == running;
    st.prior_max_wins = running > x;
    if (st.tie) ++summary.tie_count;
    running = std::max(running, x);
    st.running_max = running;
    st.below_threshold = running <= s.threshold_at(n);
    visit(st);
  }
  return summary;
}

OrderDiagnostic order1_diagnostic(const MaximaScenario& s, std::int64_t n,
                                  std::int64_t replications, std::uint64_t seed) {
  if (n < s.first_index + 1) {
    throw std::domain_error("diagnostic needs n - 1 at or after the scenario start");
  }
  if (replications < 1) throw ConfigError("diagnostic needs at least one replication");
  const IndicatorKernel k = maxima_event_kernel(s);
  OrderDiagnostic d;
  d.kernel_value = k.transition(n - s.first_index + 1, 1u);
  std::int64_t hit_hit = 0, hit_hit_next = 0, hit_miss = 0, hit_miss_next = 0;
  for (std::int64_t r = 0; r < replications; ++r) {
    bool prev = false, curr = false, next = false;
    simulate_scheme(s, n + 1, mix_seed(seed, (std::uint64_t)r), [&](const SchemeStep& st) {
      if (st.n == n - 1) prev = st.below_threshold;
      if (st.n == n) curr = st.below_threshold;
      if (st.n == n + 1) next = st.below_threshold;
    });
    if (!curr) continue;
    if (prev) {
      ++hit_hit;
      hit_hit_next += next ? 1 : 0;
    } else {
      ++hit_miss;
      hit_miss_next += next ? 1 : 0;
    }
  }
  d.count_hit_hit = hit_hit;
  d.count_hit_miss = hit_miss;
  d.freq_given_hit_hit =
      hit_hit > 0 ? (double)hit_hit_next / (double)hit_hit
                  : std::numeric_limits<double>::quiet_NaN();
  d.freq_given_hit_miss =
      hit_miss > 0 ? (double)hit_miss_next / (double)hit_miss
                   : std::numeric_limits<double>::quiet_NaN();
  return d;
}

}  // namespace bcmc
