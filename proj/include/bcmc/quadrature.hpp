#pragma once

#include <functional>
#include <vector>

#include "bcmc/errors.hpp"

namespace bcmc {

enum class Singularity { None, LeftEndpoint, RightEndpoint };

struct IntegrandSpec {
  std::function<double(double)> f;
  Singularity singular = Singularity::None;
  double tolerance = 1e-10;          // absolute tolerance on the total
  std::vector<double> breakpoints;   // interior split hints; honored when singular == None
  int panel_budget = 10000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

// Adaptive panel integration with an embedded Gauss(7)/Gauss(15) pair.
// Subdivision is deterministic: always bisect the worst panel, leftmost on ties.
// A declared endpoint singularity is lifted with the exponential substitution
// u = b - (b-a) e^{-t} (right endpoint; mirrored for the left), after which the
// transformed integrand decays like e^{-t} and is walked in fixed-length blocks
// until a block contributes less than tolerance/100.
// Exceeding the panel budget raises AccuracyError carrying the best value so far.
QuadratureResult integrate(const IntegrandSpec& spec, double a, double b);

}  // namespace bcmc
