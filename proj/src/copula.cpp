#include "bcmc/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bcmc/errors.hpp"
#include "bcmc/quadrature.hpp"

namespace bcmc {

namespace {

void check_unit_pair(double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("copula arguments must lie in [0,1]");
  }
}

double clamp_unit_open(double u) {
  const double lo = std::numeric_limits<double>::denorm_min();
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::min(std::max(u, lo), hi);
}

// u^(n-1) concentrates in a band of width ~u_max/n below u_max. A fresh
// panel spanning that whole band has no Gauss node inside it at large n, so
// every node reads ~0 and the panel is accepted at face value; seeding panel
// edges commensurate with the band keeps the mass visible at any n.
void seed_endpoint_band(IntegrandSpec& spec, double u_max, double dn) {
  for (const double k : {1.0, 4.0, 16.0, 64.0, 256.0})
    spec.breakpoints.push_back(u_max * (1.0 - k / dn));
}

}  // namespace

double Copula::value(double u, double v) const {
  check_unit_pair(u, v);
  switch (family) {
    case CopulaFamily::Independence:
      return u * v;
    case CopulaFamily::Fgm:
      return u * v * (1.0 + lambda * (1.0 - u) * (1.0 - v));
    case CopulaFamily::Comonotone:
      return std::min(u, v);
  }
  throw ConsistencyError("unreachable copula family");
}

double Copula::v_minus_value(double u, double v) const {
  check_unit_pair(u, v);
  switch (family) {
    case CopulaFamily::Independence:
      return v * (1.0 - u);
    case CopulaFamily::Fgm:
      // v - uv(1 + L(1-u)(1-v)) factors as v(1-u)(1 - Lu(1-v))
      return v * (1.0 - u) * (1.0 - lambda * u * (1.0 - v));
    case CopulaFamily::Comonotone:
      return u < v ? v - u : 0.0;
  }
  throw ConsistencyError("unreachable copula family");
}

double Copula::d1(double u, double v) const {
  check_unit_pair(u, v);
  switch (family) {
    case CopulaFamily::Independence:
      return v;
    case CopulaFamily::Fgm:
      return v * (1.0 + lambda * (1.0 - v) * (1.0 - 2.0 * u));
    case CopulaFamily::Comonotone:
      return u < v ? 1.0 : 0.0;
  }
  throw ConsistencyError("unreachable copula family");
}

double Copula::conditional_quantile(double w, double u) const {
  if (!(w >= 0.0 && w <= 1.0 && u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("conditional quantile arguments must lie in [0,1]");
  }
  switch (family) {
    case CopulaFamily::Independence:
      return w;
    case CopulaFamily::Fgm: {
      // solve v + a v(1-v) = w with a = L(1-2u); the quadratic root below is
      // the one continuous at a = 0 and stays in [0,1]
      const double a = lambda * (1.0 - 2.0 * u);
      const double b = 1.0 + a;
      const double disc = std::max(b * b - 4.0 * a * w, 0.0);
      const double den = b + std::sqrt(disc);
      if (den == 0.0) return 0.0;  // only reachable at w = 0, a = -1
      return std::clamp(2.0 * w / den, 0.0, 1.0);
    }
    case CopulaFamily::Comonotone:
      return u;
  }
  throw ConsistencyError("unreachable copula family");
}

Copula independence_copula() { return Copula{CopulaFamily::Independence, 0.0}; }

Copula fgm_copula(double lambda) {
  if (!(lambda >= -1.0 && lambda <= 1.0)) {
    throw ConfigError("fgm parameter must lie in [-1,1]");
  }
  return Copula{CopulaFamily::Fgm, lambda};
}

Copula comonotone_copula() { return Copula{CopulaFamily::Comonotone, 0.0}; }

std::pair<double, double> sample_pair(const BivariateModel& m, Rng& rng) {
  const double u = rng.uniform01();
  const double w = rng.uniform01();
  const double v = clamp_unit_open(m.copula.conditional_quantile(w, u));
  return {m.margin_x.quantile(u), m.margin_y.quantile(v)};
}

void concomitant_stream(const BivariateModel& m, std::int64_t T, std::uint64_t seed,
                        const std::function<void(const ConcomitantStep&)>& visit) {
  if (T < 1) throw std::domain_error("stream needs T >= 1");
  if (!visit) throw ConfigError("stream needs a visitor");
  Rng rng(seed);
  ConcomitantStep st;
  for (std::int64_t n = 1; n <= T; ++n) {
    const auto [x, y] = sample_pair(m, rng);
    if (n == 1 || x >= st.x_max) {
      st.x_max = x;
      st.y_at_max = y;
    }
    st.n = n;
    visit(st);
  }
}

double prob_concomitant_leq(const BivariateModel& m, std::int64_t n, double y) {
  if (n < 1) throw std::domain_error("prob_concomitant_leq needs n >= 1");
  const double v = m.margin_y.cdf(y);
  const Copula cop = m.copula;
  const double dn = (double)n;
  IntegrandSpec spec;
  spec.f = [cop, v, dn](double u) { return dn * std::pow(u, dn - 1.0) * cop.d1(u, v); };
  spec.tolerance = 1e-10;
  spec.breakpoints = {v};
  seed_endpoint_band(spec, 1.0, dn);
  const QuadratureResult res = integrate(spec, 0.0, 1.0);
  return std::clamp(res.value, 0.0, 1.0);
}

double concomitant_criterion_term(const BivariateModel& m, std::int64_t n, double y,
                                  double u_max) {
  if (n < 1) throw std::domain_error("criterion term needs n >= 1");
  if (!(u_max > 0.0 && u_max <= 1.0)) throw ConfigError("u_max must lie in (0,1]");
  const double v = m.margin_y.cdf(y);
  const Copula cop = m.copula;
  const double dn = (double)n;
  IntegrandSpec spec;
  spec.f = [cop, v, dn](double u) {
    return dn * std::pow(u, dn - 1.0) * cop.v_minus_value(u, v) * (1.0 - cop.d1(u, v));
  };
  spec.tolerance = 1e-10;
  spec.breakpoints = {v};
  seed_endpoint_band(spec, u_max, dn);
  const QuadratureResult res = integrate(spec, 0.0, u_max);
  return std::max(res.value, 0.0);
}

double matched_truncation_point(std::int64_t N) {
  if (N < 1) throw std::domain_error("truncation point needs N >= 1");
  const double dn = (double)N;
  const auto log_tail = [dn](double u) {
    return dn * std::log(u) + std::log1p(dn * (1.0 - u)) - 2.0 * std::log1p(-u);
  };
  const double target = std::log(1e-8);
  double lo = 1e-6, hi = 1.0 - 1e-12;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_tail(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ImproperTailFit concomitant_criterion_integral(const BivariateModel& m, double y) {
  const double v = m.margin_y.cdf(y);
  const Copula cop = m.copula;
  IntegrandSpec spec;
  spec.f = [cop, v](double u) {
    const double d = 1.0 - u;
    return cop.v_minus_value(u, v) * (1.0 - cop.d1(u, v)) / (d * d);
  };
  spec.tolerance = 1e-12;
  spec.breakpoints = {v};

  ImproperTailFit out;
  double acc = 0.0;
  double lower = 0.0;
  for (int j = 1; j <= 6; ++j) {
    const double eps = std::pow(10.0, -j);
    const double upper = 1.0 - eps;
    acc += integrate(spec, lower, upper).value;
    out.probes.emplace_back(eps, acc);
    lower = upper;
  }
  out.partial_value = acc;

  const size_t k = out.probes.size();
  double mx = 0.0, my = 0.0;
  for (const auto& [eps, val] : out.probes) {
    mx += -std::log(eps);
    my += val;
  }
  mx /= (double)k;
  my /= (double)k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [eps, val] : out.probes) {
    const double dx = -std::log(eps) - mx;
    sxx += dx * dx;
    sxy += dx * (val - my);
  }
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double rss = 0.0;
  for (const auto& [eps, val] : out.probes) {
    const double r = val - (out.intercept - out.slope * std::log(eps));
    rss += r * r;
  }
  out.residual_rms = std::sqrt(rss / (double)k);
  out.divergent = out.slope > std::max(10.0 * out.residual_rms, 1e-9);
  return out;
}

LimitEstimate beta_limit(const BivariateModel& m, double y) {
  const double v = m.margin_y.cdf(y);
  LimitEstimate out;
  out.probes.reserve(50);
  for (int j = 1; j <= 50; ++j) {
    const double du = std::ldexp(1.0, -j);
    out.probes.push_back(m.copula.v_minus_value(1.0 - du, v) / du);
  }
  out.value = out.probes.back();
  out.converged = true;
  for (size_t i = out.probes.size() - 5; i < out.probes.size(); ++i) {
    if (!(std::abs(out.probes[i] - out.probes[i - 1]) < 1e-6)) out.converged = false;
  }
  return out;
}

std::string to_string(AsVerdict v) {
  switch (v) {
    case AsVerdict::ConvergesAS: return "ConvergesAS";
    case AsVerdict::DoesNotConvergeAS: return "DoesNotConvergeAS";
    case AsVerdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

AsConvergenceReport as_convergence_verdict(const BivariateModel& m,
                                           const std::vector<double>& y_grid,
                                           std::int64_t series_budget) {
  if (y_grid.empty()) throw ConfigError("verdict needs a nonempty y grid");
  if (series_budget < 1000) throw ConfigError("series budget too small to classify");
  AsConvergenceReport rep;
  bool any_divergent = false;
  bool any_indeterminate = false;
  for (const double y : y_grid) {
    AsPerY row;
    row.y = y;
    row.fit = concomitant_criterion_integral(m, y);

    const BivariateModel cap = m;
    TermSequence seq;
    seq.first_index = 1;
    seq.term_at = [cap, y](std::int64_t n) {
      return concomitant_criterion_term(cap, n, y);
    };
    ClassifyBudget budget;
    budget.max_index = series_budget;
    budget.partial_sum_horizon = std::min<std::int64_t>(2000, series_budget);
    row.series = classify(seq, budget);

    if (row.series.verdict == SeriesClass::Convergent && row.fit.divergent) {
      throw ConsistencyError("summed criterion terms converge but the integral diverges at y = " +
                             std::to_string(y));
    }
    if (row.series.verdict == SeriesClass::Divergent && !row.fit.divergent) {
      throw ConsistencyError("summed criterion terms diverge but the integral stays finite at y = " +
                             std::to_string(y));
    }
    if (row.series.verdict == SeriesClass::Indeterminate) {
      row.verdict = AsVerdict::Indeterminate;
      any_indeterminate = true;
    } else if (row.fit.divergent) {
      row.verdict = AsVerdict::DoesNotConvergeAS;
      any_divergent = true;
    } else {
      row.verdict = AsVerdict::ConvergesAS;
    }
    rep.per_y.push_back(std::move(row));
  }
  rep.overall = any_divergent
                    ? AsVerdict::DoesNotConvergeAS
                    : (any_indeterminate ? AsVerdict::Indeterminate : AsVerdict::ConvergesAS);
  return rep;
}

}  // namespace bcmc
