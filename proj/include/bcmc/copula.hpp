#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bcmc/distributions.hpp"
#include "bcmc/rng.hpp"
#include "bcmc/series.hpp"

namespace bcmc {

enum class CopulaFamily { Independence, Fgm, Comonotone };

// Bivariate dependence structure on the unit square. d1 is the partial
// derivative in the first argument, which for fixed u is the conditional
// distribution function of V given U = u (defined almost everywhere; the
// comonotone case uses the step version 1{u < v}).
struct Copula {
  CopulaFamily family = CopulaFamily::Independence;
  double lambda = 0.0;  // Fgm only, in [-1, 1]

  double value(double u, double v) const;
  // v - C(u,v) computed without cancellation near u = 1, where the direct
  // difference loses every significant digit.
  double v_minus_value(double u, double v) const;
  double d1(double u, double v) const;
  // v solving d1(u, v) = w, used for conditional-inversion sampling.
  double conditional_quantile(double w, double u) const;
};

Copula independence_copula();
Copula fgm_copula(double lambda);
Copula comonotone_copula();

struct BivariateModel {
  Copula copula;
  UnivariateModel margin_x;
  UnivariateModel margin_y;
};

// Conditional-inversion draw: u uniform first, then w uniform, v solving
// d1(u, v) = w; returned on the margins' scales.
std::pair<double, double> sample_pair(const BivariateModel& m, Rng& rng);

// Running maximum of the x coordinate with its paired y value. A newcomer
// tied with the running maximum replaces it (probability-zero event for
// continuous margins).
struct ConcomitantStep {
  std::int64_t n = 0;
  double x_max = 0.0;
  double y_at_max = 0.0;
};

void concomitant_stream(const BivariateModel& m, std::int64_t T, std::uint64_t seed,
                        const std::function<void(const ConcomitantStep&)>& visit);

// P(paired value of the maximum of n draws <= y), computed as
// n * integral of u^(n-1) d1(u, G(y)) over the unit interval.
double prob_concomitant_leq(const BivariateModel& m, std::int64_t n, double y);

// P(paired value at n above y, paired value at n+1 at or below y):
// n * integral of u^(n-1) (v - C)(1 - d1) du on [0, u_max], v = G(y).
// u_max < 1 supports matched truncations of the series/integral identity.
double concomitant_criterion_term(const BivariateModel& m, std::int64_t n, double y,
                                  double u_max = 1.0);

// Cutoff u_N < 1 at which the collapsed geometric tail past N, namely
// u^N (1 + N(1-u)) / (1-u)^2, falls to 1e-8. Summing the first N criterion
// terms on [0, u_N] then matches the truncated integral to ~1e-8.
double matched_truncation_point(std::int64_t N);

// Improper criterion integral (v - C)(1 - d1)/(1-u)^2 du toward u = 1,
// probed at cutoffs 1 - eps for eps = 1e-1 .. 1e-6 and fitted against
// a*log(1/eps) + b. A slope clear of the fit residual flags logarithmic
// divergence.
struct ImproperTailFit {
  double partial_value = 0.0;  // integral over [0, 1 - 1e-6]
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  bool divergent = false;
  std::vector<std::pair<double, double>> probes;  // (eps, partial integral)
};

ImproperTailFit concomitant_criterion_integral(const BivariateModel& m, double y);

// Limit of (v - C(u,v))/(1-u) as u -> 1, probed at u = 1 - 2^-j, j = 1..50.
// Lies in [0, 1]; zero is necessary for the paired values to converge to the
// top of the y support.
struct LimitEstimate {
  double value = 0.0;
  bool converged = false;
  std::vector<double> probes;
};

LimitEstimate beta_limit(const BivariateModel& m, double y);

enum class AsVerdict { ConvergesAS, DoesNotConvergeAS, Indeterminate };

std::string to_string(AsVerdict v);

struct AsPerY {
  double y = 0.0;
  ImproperTailFit fit;
  SeriesVerdict series;
  AsVerdict verdict = AsVerdict::Indeterminate;
};

struct AsConvergenceReport {
  std::vector<AsPerY> per_y;
  AsVerdict overall = AsVerdict::Indeterminate;
};

// Almost-sure convergence verdict for the paired value of the running
// maximum: ConvergesAS iff the criterion integral is finite at every grid
// point. Each integral verdict is cross-checked against the series
// classifier on the criterion terms (the two routes express the same
// quantity); a decisive disagreement throws ConsistencyError.
AsConvergenceReport as_convergence_verdict(const BivariateModel& m,
                                           const std::vector<double>& y_grid,
                                           std::int64_t series_budget = 20000);

}  // namespace bcmc
