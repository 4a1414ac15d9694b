#pragma once

#include <functional>
#include <string>

#include "bcmc/rng.hpp"

namespace bcmc {

// Continuous distribution described by its cdf, log-cdf and quantile function.
// cdf is total on the real line (0 below the support, 1 above it); quantile is
// defined on the open interval (0,1). log_cdf equals log(cdf) and stays usable
// when cdf powers would underflow.
struct UnivariateModel {
  std::string name;
  std::function<double(double)> cdf;
  std::function<double(double)> log_cdf;
  std::function<double(double)> quantile;
  double left = 0.0;   // left extremity of the support
  double right = 1.0;  // right extremity (may be +inf)
};

UnivariateModel uniform_01();
UnivariateModel exponential_model(double rate);
UnivariateModel pareto_model(double shape);  // survival x^-shape on [1, inf)

// Distribution of the same support with cdf F^alpha, alpha > 0.
// quantile(w) = base.quantile(w^(1/alpha)); the inner power is clamped into the
// open unit interval so extreme alpha cannot push it onto the endpoints.
UnivariateModel power_transform(const UnivariateModel& base, double alpha);

// Inverse-transform sampling; the only sampling route used anywhere.
double sample(const UnivariateModel& m, Rng& rng);

}  // namespace bcmc
