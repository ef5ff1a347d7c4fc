#include <doctest.h>

#include <cmath>
#include <random>

#include "hlri/errors.hpp"
#include "hlri/fitness.hpp"

using namespace hlri;

namespace {

PenaltyParams params(double C, double K, double q, double eta) {
  PenaltyParams p;
  p.C = C;
  p.lambda = 1.0;
  p.K = K;
  p.q = q;
  p.eta = eta;
  return p;
}

}  // namespace

TEST_CASE("penalty branches") {
  const PenaltyParams p = params(10, 100, 2, 1e-3);
  CHECK(penalty(1e-3, p) == 0.0);
  CHECK(penalty(-1e-3, p) == 0.0);
  CHECK(penalty(0.0, p) == 0.0);
  CHECK(penalty(0.5, p) == doctest::Approx(25.0));
  CHECK(penalty(-0.5, p) == doctest::Approx(25.0));
}

TEST_CASE("fitness examples") {
  const PenaltyParams p = params(10, 100, 2, 1e-3);
  CHECK(fitness(3.0, 5e-4, p) == 7.0);
  CHECK(fitness(0.0, 0.0, p) == 10.0);
  CHECK(fitness(2.0, 0.5, p) == doctest::Approx(-17.0));
}

TEST_CASE("calibration through two anchors") {
  auto [K1, q1] = calibrate_penalty({1, 100}, {10, 10000});
  CHECK(q1 == doctest::Approx(2.0));
  CHECK(K1 == doctest::Approx(100.0));
  auto [K2, q2] = calibrate_penalty({2, 8}, {4, 64});
  CHECK(q2 == doctest::Approx(3.0));
  CHECK(K2 == doctest::Approx(1.0));
  // Both anchors on the same power law pin K at the first anchor's target.
  auto [K3, q3] = calibrate_penalty({1, 7}, {3, 7 * 9});
  CHECK(K3 == doctest::Approx(7.0));
  CHECK(q3 == doctest::Approx(2.0));

  CHECK_THROWS_AS(calibrate_penalty({1, 5}, {1, 50}), CalibrationError);
  CHECK_THROWS_AS(calibrate_penalty({1, 0}, {2, 50}), CalibrationError);
  CHECK_THROWS_AS(calibrate_penalty({1, 5}, {2, -1}), CalibrationError);
}

TEST_CASE("default rule") {
  const double g0 = 3.0, beta_max = 8.0;
  const PenaltyParams p = default_penalty(g0, beta_max);
  CHECK(p.eta == doctest::Approx(3e-3));
  CHECK(p.C == 9.0);
  CHECK(p.lambda == 1.0);
  CHECK(p.q == doctest::Approx(2.0));
  CHECK(penalty(0.1 * g0, p) == doctest::Approx(p.C));
  CHECK(penalty(g0, p) == doctest::Approx(100 * p.C));
  CHECK_NOTHROW(p.validate(beta_max));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(params(8, 1, 2, 1e-3).validate(8.0), ConfigError);
  CHECK_THROWS_AS(params(9, 0, 2, 1e-3).validate(8.0), ConfigError);
  CHECK_THROWS_AS(params(9, 1, 0, 1e-3).validate(8.0), ConfigError);
  CHECK_THROWS_AS(params(9, 1, 2, 0).validate(8.0), ConfigError);
}

TEST_CASE("total repair beats partial repair at the same beta under the default rule") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const double g0 = 0.1 + 50 * u(gen);
    const PenaltyParams p = default_penalty(g0, 8.0);
    const double beta = 8.0 * u(gen);
    const double g_total = p.eta * (2 * u(gen) - 1);
    const double g_partial = p.eta * (1.0 + 1e-6 + 10 * u(gen)) * (u(gen) < 0.5 ? -1 : 1);
    CHECK(fitness(beta, g_total, p) > fitness(beta, g_partial, p));
  }
}

TEST_CASE("monotonicity in |g| and in beta") {
  const PenaltyParams p = default_penalty(5.0, 8.0);
  double last = 0;
  for (double g = 0; g < 10; g += 0.01) {
    const double v = penalty(g, p);
    CHECK(v >= last);
    last = v;
  }
  for (double g : {0.0, 0.3, 2.0}) {
    for (double b = 0; b < 8; b += 0.1) CHECK(fitness(b + 0.1, g, p) < fitness(b, g, p));
  }
}
