#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "hlri/errors.hpp"
#include "hlri/oracle.hpp"
#include "support/oracles.hpp"

using namespace hlri;
using namespace hlri::oracle;

namespace {

BenchmarkProblem planar(std::string name, std::function<double(double, double)> f) {
  BenchmarkProblem p;
  p.space = UncertaintySpace::standard(2);
  p.limit_state = {std::move(name), 2, [f](std::span<const double> x) { return f(x[0], x[1]); }};
  return p;
}

// Surface y2 = 3 - 0.5 (1 - cos 3 y1) bends towards the origin; G is concave
// in y1 near the axis and HL-RF keeps cycling instead of settling.
BenchmarkProblem wavy() {
  return planar("wavy", [](double x, double y) { return 3.0 - y + 0.5 * (std::cos(3.0 * x) - 1.0); });
}

}  // namespace

TEST_CASE("beta_along examples") {
  const auto lin = make_linear(Vector{1, 0}, 3.0);
  const RayScan scan{512, 8.0, 1e-10};
  const auto root = beta_along(Vector{1, 0}, lin, scan);
  REQUIRE(root);
  CHECK(std::abs(*root - 3.0) <= 1e-10);
  CHECK_FALSE(beta_along(Vector{0, 1}, lin, scan));

  const auto sph = make_offset_sphere(Vector{4, 0}, 1.0);
  const auto first = beta_along(Vector{1, 0}, sph, scan);
  REQUIRE(first);
  CHECK(std::abs(*first - 3.0) <= 1e-10);
}

TEST_CASE("beta_along agrees with an independent bisection") {
  std::mt19937_64 gen(61);
  std::uniform_real_distribution<double> u(-0.3, 0.3);  // rays within the cone that meets the parabola
  const auto p = make_parabolic(5.0, 0.5);
  for (int i = 0; i < 50; ++i) {
    const double th = std::numbers::pi / 2 + u(gen);
    const Vector a{std::cos(th), std::sin(th)};
    const auto root = beta_along(a, p);
    REQUIRE(root);
    // Still safe just before the reported crossing, so it is the first one.
    const double hi = *root + 1e-3;
    CHECK(g_along(*root - 1e-3, a, p) > 0.0);
    const double ref = test::bisect([&](double b) { return g_along(b, a, p); }, 0.0, hi, 200);
    CHECK(std::abs(*root - ref) <= 1e-9);
  }
}

TEST_CASE("brute force examples") {
  const auto lin = make_linear(Vector{0.6, 0.8}, 3.0);
  const auto r = brute_force_mpp(lin);
  CHECK(std::abs(r.beta - 3.0) <= 1e-3);
  CHECK(test::angle_deg(r.direction, Vector{0.6, 0.8}) <= 0.5);
  CHECK(r.method == Method::brute_force);
  CHECK(r.evaluations > 0);
  CHECK(std::abs(g_along(r.beta, r.direction, lin)) <= 1e-8);

  CHECK(std::abs(brute_force_mpp(make_offset_sphere(Vector{4, 0}, 1.0)).beta - 3.0) <= 1e-3);
  CHECK(std::abs(brute_force_mpp(make_offset_sphere(Vector{3, 2, 1}, 1.0)).beta - (std::sqrt(14.0) - 1.0)) <= 1e-3);
  CHECK(std::abs(brute_force_mpp(make_linear(Vector{1, 1, 1, 1}, 2.5)).beta - 2.5) <= 1e-3);

  CHECK_THROWS_AS(brute_force_mpp(make_linear(Vector{1, 1, 1, 1, 1}, 3.0)), ConfigError);
  const auto never = planar("never", [](double, double) { return 1.0; });
  CHECK_THROWS(brute_force_mpp(never));
}

TEST_CASE("brute force is the minimum over the scanned rays") {
  const auto p = make_parabolic(5.0, 0.5);
  const auto r = brute_force_mpp(p);
  for (int i = 0; i < 720; ++i) {
    const double th = 2 * std::numbers::pi * i / 720.0;
    const auto b = beta_along(Vector{std::cos(th), std::sin(th)}, p);
    if (b) CHECK(r.beta <= *b + 1e-9);
  }
}

TEST_CASE("HL-RF examples") {
  const Vector origin{0, 0};
  const auto lin = make_linear(Vector{0.6, 0.8}, 3.0);
  HlrfOptions two;
  two.max_iter = 2;
  two.tol = 1e-8;  // above the finite-difference noise of the second iterate
  const auto r = hlrf(lin, origin, two);
  REQUIRE(r);
  CHECK(std::abs(r->beta - 3.0) <= 1e-8);
  CHECK(test::angle_deg(r->direction, Vector{0.6, 0.8}) <= 1e-6);
  CHECK(r->method == Method::hlrf);

  const auto sph = hlrf(make_offset_sphere(Vector{4, 0}, 1.0), origin);
  REQUIRE(sph);
  CHECK(std::abs(sph->beta - 3.0) <= 1e-4);

  CHECK_FALSE(hlrf(wavy(), Vector{0.2, 0.0}));
  // The surface does exist: the failure is the iteration's, not the problem's.
  CHECK(brute_force_mpp(wavy()).beta < 3.0);
}

TEST_CASE("oracles agree with closed forms") {
  for (const auto& p : {make_linear(Vector{1, 2}, 3.0), make_linear(Vector{1, -1, 2}, 2.0),
                        make_offset_sphere(Vector{4, 0}, 1.0), make_offset_sphere(Vector{3, 2, 1}, 1.0),
                        make_gapped(3.0, 1.0)}) {
    const auto exact = closed_form(p);
    REQUIRE(exact);
    CHECK(exact->method == Method::closed_form);
    CHECK(std::abs(brute_force_mpp(p).beta - exact->beta) <= 1e-3);
    const auto h = hlrf(p, Vector(p.dimension(), 0.0));
    if (h) CHECK(std::abs(h->beta - exact->beta) <= 1e-4);
  }
  CHECK_FALSE(closed_form(make_parabolic(5.0, 0.5)));
}

TEST_CASE("parabolic golden file reproduces") {
  std::ifstream in("tests/golden/oracle_parabolic.json");
  REQUIRE(in);
  const auto golden = nlohmann::json::parse(in);
  double pinned = 0, pinned_hlrf = 0;
  for (const auto& r : golden.at("results")) {
    if (r.at("method") == "brute_force") pinned = r.at("beta").get<double>();
    if (r.at("method") == "hlrf") pinned_hlrf = r.at("beta").get<double>();
  }
  REQUIRE(pinned > 0);
  const auto& opt = golden.at("options");
  BruteForceOptions o;
  o.angles = opt.at("angles").get<int>();
  o.scan = {opt.at("grid_points").get<int>(), opt.at("beta_cap").get<double>(), opt.at("tol").get<double>()};
  const auto p = make_parabolic(5.0, 0.5);
  CHECK(std::abs(brute_force_mpp(p, o).beta - pinned) <= 1e-9);
  CHECK(std::abs(pinned - pinned_hlrf) <= 1e-4);
}

TEST_CASE("oracle json") {
  OracleResult r;
  r.beta = 2.0;
  r.direction = {1, 0};
  r.method = Method::hlrf;
  r.evaluations = 5;
  const auto j = to_json(r);
  CHECK(j.at("method") == "hlrf");
  CHECK(j.at("beta") == 2.0);
  CHECK(j.at("evaluations") == 5);
}
