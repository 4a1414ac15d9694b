#include <cmath>

#include "bcmc/distributions.hpp"
#include "bcmc/errors.hpp"
#include "bcmc/rng.hpp"
#include "doctest.h"

using namespace bcmc;

TEST_CASE("uniform model basics") {
  const auto u = uniform_01();
  CHECK(u.cdf(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(u.cdf(-1.0) == 0.0);
  CHECK(u.cdf(2.0) == 1.0);
  CHECK(u.quantile(0.7) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(u.log_cdf(0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("exponential model") {
  const auto e = exponential_model(1.0);
  CHECK(e.cdf(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(e.quantile(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(e.cdf(0.0) == 0.0);
  // cdf and quantile are inverse on the open interval.
  for (double w : {1e-6, 0.25, 0.9, 1.0 - 1e-9})
    CHECK(e.cdf(e.quantile(w)) == doctest::Approx(w).epsilon(1e-11));
  CHECK_THROWS_AS((void)exponential_model(-1.0), ConfigError);
}

TEST_CASE("pareto model") {
  const auto p = pareto_model(2.0);
  CHECK(p.cdf(2.0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(p.cdf(0.5) == 0.0);
  CHECK(p.quantile(0.75) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.left == 1.0);
}

TEST_CASE("power transform squares the uniform cdf") {
  const auto sq = power_transform(uniform_01(), 2.0);
  CHECK(sq.cdf(0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(sq.quantile(0.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sq.log_cdf(0.5) == doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-14));
  CHECK_THROWS_AS((void)power_transform(uniform_01(), 0.0), ConfigError);
}

TEST_CASE("power transform survives extreme exponents") {
  const auto big = power_transform(uniform_01(), 1e300);
  const double q = big.quantile(0.5);
  CHECK(q > 0.0);
  CHECK(q < 1.0);
  CHECK(std::isfinite(big.log_cdf(0.5)));

  const auto small = power_transform(uniform_01(), 1e-300);
  const double qs = small.quantile(0.5);
  CHECK(qs > 0.0);
  CHECK(qs < 1.0);
}

TEST_CASE("sampling is deterministic given the seed") {
  const auto e = exponential_model(2.0);
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(sample(e, a) == sample(e, b));
  Rng c(43);
  bool differs = false;
  Rng a2(42);
  for (int i = 0; i < 100; ++i)
    if (sample(e, a2) != sample(e, c)) differs = true;
  CHECK(differs);
}

TEST_CASE("uniform draws stay inside the open interval") {
  Rng r(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("seed mixing separates replication streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(1, 5) == mix_seed(1, 5));
}

TEST_CASE("empirical cdf of samples matches the model") {
  const auto p = pareto_model(1.5);
  Rng r(2024);
  const int n = 200000;
  int below = 0;
  for (int i = 0; i < n; ++i)
    if (sample(p, r) <= 2.0) ++below;
  const double expect = p.cdf(2.0);
  const double se = std::sqrt(expect * (1 - expect) / n);
  CHECK(std::fabs(double(below) / n - expect) <= 4.0 * se);
}
