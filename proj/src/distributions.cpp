#include "bcmc/distributions.hpp"

#include <cmath>
#include <limits>

#include "bcmc/errors.hpp"

namespace bcmc {

namespace {

double clamp_unit_open(double u) {
  const double lo = std::numeric_limits<double>::denorm_min();
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  if (u < lo) return lo;
  if (u > hi) return hi;
  return u;
}

void require_unit_open(double w, const char* who) {
  if (!(w > 0.0 && w < 1.0)) {
    throw ConfigError(std::string(who) + ": quantile argument must lie in (0,1)");
  }
}

}  // namespace

UnivariateModel uniform_01() {
  UnivariateModel m;
  m.name = "uniform";
  m.cdf = [](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x;
  };
  m.log_cdf = [](double x) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    if (x >= 1.0) return 0.0;
    return std::log(x);
  };
  m.quantile = [](double w) {
    require_unit_open(w, "uniform");
    return w;
  };
  m.left = 0.0;
  m.right = 1.0;
  return m;
}

UnivariateModel exponential_model(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ConfigError("exponential_model: rate must be a positive finite number");
  }
  UnivariateModel m;
  m.name = "exponential";
  m.cdf = [rate](double x) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-rate * x);
  };
  m.log_cdf = [rate](double x) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    // log(1 - e^{-rx}) without cancellation on either side
    return std::log(-std::expm1(-rate * x));
  };
  m.quantile = [rate](double w) {
    require_unit_open(w, "exponential");
    return -std::log1p(-w) / rate;
  };
  m.left = 0.0;
  m.right = std::numeric_limits<double>::infinity();
  return m;
}

UnivariateModel pareto_model(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw ConfigError("pareto_model: shape must be a positive finite number");
  }
  UnivariateModel m;
  m.name = "pareto";
  m.cdf = [shape](double x) {
    if (x <= 1.0) return 0.0;
    return -std::expm1(-shape * std::log(x));
  };
  m.log_cdf = [shape](double x) {
    if (x <= 1.0) return -std::numeric_limits<double>::infinity();
    return std::log(-std::expm1(-shape * std::log(x)));
  };
  m.quantile = [shape](double w) {
    require_unit_open(w, "pareto");
    return std::exp(-std::log1p(-w) / shape);
  };
  m.left = 1.0;
  m.right = std::numeric_limits<double>::infinity();
  return m;
}

UnivariateModel power_transform(const UnivariateModel& base, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("power_transform: exponent must be a positive finite number");
  }
  UnivariateModel m;
  m.name = base.name + "^" + std::to_string(alpha);
  auto base_cdf = base.cdf;
  auto base_log_cdf = base.log_cdf;
  auto base_quantile = base.quantile;
  m.log_cdf = [base_log_cdf, alpha](double x) { return alpha * base_log_cdf(x); };
  m.cdf = [base_log_cdf, alpha](double x) { return std::exp(alpha * base_log_cdf(x)); };
  m.quantile = [base_quantile, alpha](double w) {
    require_unit_open(w, "power_transform");
    return base_quantile(clamp_unit_open(std::exp(std::log(w) / alpha)));
  };
  m.left = base.left;
  m.right = base.right;
  return m;
}

double sample(const UnivariateModel& m, Rng& rng) {
  return m.quantile(rng.uniform01());
}

}  // namespace bcmc
