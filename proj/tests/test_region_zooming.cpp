#include <doctest.h>

#include <cmath>
#include <random>

#include "hlri/errors.hpp"
#include "hlri/problem_model.hpp"
#include "hlri/zoom.hpp"

using namespace hlri;

namespace {

MixedGenotype member(Vector direction, double beta = 3.0, double final_g = 0.0) {
  MixedGenotype g;
  g.direction = std::move(direction);
  g.beta = beta;
  RepairOutcome r;
  r.final_beta = beta;
  r.final_g = final_g;
  r.status = std::abs(final_g) <= 1e-3 ? RepairStatus::total : RepairStatus::partial;
  g.repair = r;
  return g;
}

ZoomConfig zoom_with(double delta_a) {
  ZoomConfig z;
  z.delta_a = delta_a;
  return z;
}

Vector unit(std::mt19937_64& gen, std::size_t n, const Vector& around, double spread) {
  std::normal_distribution<double> d;
  Vector a(n);
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = around[i] + spread * d(gen);
    s += a[i] * a[i];
  }
  for (double& v : a) v /= std::sqrt(s);
  return a;
}

}  // namespace

TEST_CASE("initial region") {
  const auto r = initial_region(0, 8, 2);
  CHECK(r.a_min == Vector{-1, -1});
  CHECK(r.a_max == Vector{1, 1});
  CHECK(r.beta_min == 0);
  CHECK(r.beta_max == 8);
  const auto r5 = initial_region(0, 8, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(r5.a_min[i] == -1.0);
    CHECK(r5.a_max[i] == 1.0);
  }
  CHECK_THROWS_AS(initial_region(3, 3, 2), ConfigError);
  CHECK_THROWS_AS(initial_region(5, 2, 2), ConfigError);
  CHECK(r.diameter() == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("high content") {
  const auto r = initial_region(0, 8, 2);
  CHECK(high_content(member({1, 0}, 3.0, 0.0), r, 1e-3));
  CHECK_FALSE(high_content(member({1, 0}, 9.0, 0.0), r, 1e-3));
  CHECK_FALSE(high_content(member({1, 0}, 3.0, 0.5), r, 1e-3));
  MixedGenotype bare;
  bare.direction = {1, 0};
  CHECK_THROWS_AS(high_content(bare, r, 1e-3), ContractError);
}

TEST_CASE("stage 1 completion") {
  const auto r = initial_region(0, 8, 2);
  std::vector<MixedGenotype> elite{member({1, 0}), member({0, 1}), member({0.6, 0.8})};
  CHECK(stage1_complete(elite, r, 1e-3));
  elite[2] = member({0.6, 0.8}, 3.0, 0.2);
  CHECK_FALSE(stage1_complete(elite, r, 1e-3));
  CHECK_THROWS_AS(stage1_complete(std::span<const MixedGenotype>{}, r, 1e-3), ContractError);
}

TEST_CASE("reduce examples") {
  const auto r0 = initial_region(0, 8, 2);
  {
    std::vector<MixedGenotype> elite{member({0.6, 0.8}), member({0.8, 0.6})};
    const auto r = reduce(elite, r0, zoom_with(0.05), 7);
    CHECK(r.a_min[0] == doctest::Approx(0.6));
    CHECK(r.a_max[0] == doctest::Approx(0.8));
    CHECK(r.a_min[1] == doctest::Approx(0.6));
    CHECK(r.a_max[1] == doctest::Approx(0.8));
    CHECK(r.generation_created == 7);
    CHECK(r.beta_max == r0.beta_max);
  }
  {
    std::vector<MixedGenotype> elite{member({0.6, 0.8}), member({0.6, 0.8})};
    const auto r = reduce(elite, r0, zoom_with(0.1), 1);
    CHECK(r.a_min[0] == doctest::Approx(0.55));
    CHECK(r.a_max[0] == doctest::Approx(0.65));
    CHECK(r.a_min[1] == doctest::Approx(0.75));
    CHECK(r.a_max[1] == doctest::Approx(0.85));
  }
  {
    std::vector<MixedGenotype> elite{member({1.0, 0.0})};
    const auto r = reduce(elite, r0, zoom_with(0.1), 1);
    CHECK(r.a_min[0] == doctest::Approx(0.9));
    CHECK(r.a_max[0] == 1.0);
    CHECK(r.width(0) >= 0.1 - 1e-15);
    CHECK(r.a_min[1] == doctest::Approx(-0.05));
    CHECK(r.a_max[1] == doctest::Approx(0.05));
  }
}

TEST_CASE("a reduced side never outgrows its parent") {
  SearchRegion parent = initial_region(0, 8, 2);
  parent.a_min = {0.5, 0.5};
  parent.a_max = {0.7, 0.9};
  std::vector<MixedGenotype> elite{member({0.2, 0.98}), member({0.98, 0.2})};
  const auto r = reduce(elite, parent, zoom_with(0.05), 3);
  CHECK(r.width(0) <= parent.width(0) + 1e-15);
  CHECK(r.width(1) <= parent.width(1) + 1e-15);
}

TEST_CASE("successive reductions nest in diameter and keep the minimum width") {
  std::mt19937_64 gen(53);
  for (std::size_t n : {2u, 3u, 5u, 10u}) {
    for (double da : {0.05, 0.1, 0.4}) {
      for (int run = 0; run < 20; ++run) {
        SearchRegion r = initial_region(0, 8, n);
        const Vector centre = unit(gen, n, Vector(n, 0.0), 1.0);
        double spread = 0.5;
        for (int step = 0; step < 12; ++step) {
          std::vector<MixedGenotype> elite;
          for (int e = 0; e < 6; ++e) elite.push_back(member(unit(gen, n, centre, spread)));
          const SearchRegion next = reduce(elite, r, zoom_with(da), step + 1);
          CHECK(next.diameter() <= r.diameter() + 1e-12);
          CHECK(next.min_width() >= std::min(da, r.min_width()) - 1e-12);
          for (std::size_t i = 0; i < n; ++i) {
            CHECK(next.a_min[i] >= -1.0);
            CHECK(next.a_max[i] <= 1.0);
            // Quantization step follows the width, so it never grows either.
            CHECK(next.width(i) <= r.width(i) + 1e-12);
          }
          r = next;
          spread *= 0.7;
        }
      }
    }
  }
}

TEST_CASE("covers_direction is a cone test") {
  SearchRegion r = initial_region(0, 8, 2);
  r.a_min = {0.5, 0.5};
  r.a_max = {0.7, 0.9};
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(r.covers_direction(Vector{s, s}));
  CHECK(r.covers_direction(Vector{0.6, 0.8}));
  CHECK_FALSE(r.covers_direction(Vector{1.0, 0.0}));
  CHECK_FALSE(r.covers_direction(Vector{-s, -s}));
}

TEST_CASE("recoding keeps the elite and restarts the rest") {
  Rng rng(9);
  Population p;
  const auto r0 = initial_region(0, 8, 2);
  for (int i = 0; i < 10; ++i) {
    MixedGenotype g = member({0.6, 0.8}, 3.0 + 0.01 * i);
    g.bits = encode(g.direction, r0, 5).bits;
    g.fitness = 10.0 - i;
    p.members.push_back(g);
  }
  p.elite_size = 3;
  p.members[2].direction = {-0.8, 0.6};  // outside the next box
  SearchRegion next = r0;
  next.a_min = {0.5, 0.7};
  next.a_max = {0.7, 0.9};
  const std::size_t clamps = recode_population(p, next, 5, rng);
  CHECK(p.members.size() == 10);
  CHECK(clamps == 2);  // both components of (-0.8, 0.6) lie below the box
  const double step = 0.2 / 31.0;
  for (int i = 0; i < 2; ++i) {
    CHECK(p.members[i].beta == 3.0 + 0.01 * i);
    CHECK(p.members[i].repair.has_value());
    const Vector raw = decode_raw(p.members[i].bits, next, 5);
    CHECK(std::abs(raw[0] - 0.6) <= step);
    CHECK(std::abs(raw[1] - 0.8) <= step);
  }
  CHECK(variable_code(p.members[2].bits, 0, 5) == 0);
  CHECK(variable_code(p.members[2].bits, 1, 5) == 0);
  for (std::size_t i = 3; i < 10; ++i) {
    CHECK_FALSE(p.members[i].repair.has_value());
    CHECK(p.members[i].beta == next.beta_min);
    CHECK(p.members[i].bits.size() == 10);
  }
}

TEST_CASE("diversity predicate") {
  Population p;
  for (int i = 0; i < 10; ++i) {
    MixedGenotype g = member({std::cos(0.3 * i), std::sin(0.3 * i)});
    g.bits = BitString(10, 0);
    for (int k = 0; k < 10; ++k) g.bits[k] = static_cast<std::uint8_t>((i >> (k % 4)) & 1);
    g.bits[9] = static_cast<std::uint8_t>(i & 1);
    g.bits[8] = static_cast<std::uint8_t>((i >> 3) & 1);
    p.members.push_back(g);
  }
  p.elite_size = 3;
  CHECK(distinct_fraction(p.members) == 1.0);
  CHECK(elite_spread(p.elite()) > 0.05);
  CHECK(diversity_ok(p, zoom_with(0.05)));

  Population same = p;
  for (std::size_t i = 0; i < 3; ++i) same.members[i].direction = {0.6, 0.8};
  CHECK(elite_spread(same.elite()) == 0.0);
  CHECK_FALSE(diversity_ok(same, zoom_with(0.05)));

  Population few = p;
  for (std::size_t i = 4; i < 10; ++i) few.members[i].bits = few.members[3].bits;  // 4 of 10 distinct
  CHECK(distinct_fraction(few.members) == doctest::Approx(0.4));
  CHECK_FALSE(diversity_ok(few, zoom_with(0.05)));
}

TEST_CASE("zoom config validation") {
  CHECK_NOTHROW(ZoomConfig{}.validate());
  CHECK_THROWS_AS(zoom_with(2.5).validate(), ConfigError);
  CHECK_THROWS_AS(zoom_with(0.0).validate(), ConfigError);
  ZoomConfig z;
  z.diversity_floor = 1.0;
  CHECK_THROWS_AS(z.validate(), ConfigError);
}
