#include <random>

#include "doctest.h"
#include "fzs/error.hpp"
#include "fzs/membership.hpp"
#include "fzs/rule_dsl.hpp"
#include "oracles.hpp"

using fzs::MembershipFunction;

TEST_CASE("triangle and trapezoid evaluation") {
  const auto tri = MembershipFunction::triangle(30, 50, 70);
  CHECK(fzs::membership(tri, 50) == 1.0);
  CHECK(fzs::membership(tri, 30) == 0.0);
  CHECK(fzs::membership(tri, 70) == 0.0);
  CHECK(fzs::membership(tri, 10) == 0.0);

  // Expected value from a dense sampled table, not from the closed form.
  const double expected = oracle::dense_grid({30, 50, 50, 70}, 0, 100, 60);
  CHECK(expected == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fzs::membership(tri, 60) == doctest::Approx(expected).epsilon(1e-9));

  const auto shoulder = MembershipFunction::trapezoid(50, 70, 100, 100);
  CHECK(fzs::membership(shoulder, 80) == 1.0);
  CHECK(fzs::membership(shoulder, 100) == 1.0);
  CHECK(fzs::membership(shoulder, 60) == doctest::Approx(0.5));
  CHECK(fzs::membership(shoulder, 50) == 0.0);
}

TEST_CASE("left shoulder extends to the universe edge") {
  const auto l = MembershipFunction::trapezoid(0, 0, 30, 50);
  CHECK(l.left_shoulder());
  CHECK(l(0) == 1.0);
  CHECK(l(30) == 1.0);
  CHECK(l(40) == doctest::Approx(0.5));
  CHECK(l(50) == 0.0);
  const auto raised = MembershipFunction::trapezoid(10, 10, 20, 30);
  CHECK(raised(5) == 1.0);
}

TEST_CASE("malformed shapes are rejected at construction") {
  CHECK_THROWS_AS(MembershipFunction::triangle(50, 30, 70), fzs::ValidationError);
  CHECK_THROWS_AS(MembershipFunction::trapezoid(0, 10, 5, 20), fzs::ValidationError);
  CHECK_THROWS_AS(MembershipFunction::triangle(0, std::nan(""), 1), fzs::ValidationError);
}

TEST_CASE("membership stays in [0,1] and matches the closed-form oracle on random shapes") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50, 150);
  for (int trial = 0; trial < 2000; ++trial) {
    std::array<double, 4> p{u(rng), u(rng), u(rng), u(rng)};
    std::sort(p.begin(), p.end());
    if (trial % 5 == 0) p[1] = p[0];
    if (trial % 7 == 0) p[3] = p[2];
    const bool tri = trial % 2 == 0 && p[1] != p[0];
    const auto mf = tri ? MembershipFunction::triangle(p[0], p[1], p[3])
                        : MembershipFunction::trapezoid(p[0], p[1], p[2], p[3]);
    const oracle::Corners c = tri ? oracle::Corners{p[0], p[1], p[1], p[3]}
                                  : oracle::Corners{p[0], p[1], p[2], p[3]};
    for (int k = 0; k < 20; ++k) {
      const double x = u(rng);
      const double m = mf(x);
      REQUIRE(m >= 0.0);
      REQUIRE(m <= 1.0);
      CHECK(m == doctest::Approx(oracle::trapezoid(c, x)).epsilon(1e-12));
    }
    CHECK(mf(c[1]) == 1.0);
    CHECK(mf(c[2]) == 1.0);
  }
}

TEST_CASE("fuzzify the default utilization variable") {
  const auto gu = fzs::default_utilization_variable();
  const auto v60 = fzs::fuzzify(gu, 60);
  REQUIRE(v60.degrees.size() == 3);
  CHECK(v60.degrees[0] == 0.0);
  CHECK(v60.degrees[1] == doctest::Approx(0.5));
  CHECK(v60.degrees[2] == doctest::Approx(0.5));
  CHECK_FALSE(v60.clamped);

  const auto v0 = fzs::fuzzify(gu, 0);
  CHECK(v0.degrees == std::vector<double>{1.0, 0.0, 0.0});

  // Plateau of each term
  CHECK(fzs::fuzzify(gu, 15).degrees[0] == 1.0);
  CHECK(fzs::fuzzify(gu, 50).degrees[1] == 1.0);
  CHECK(fzs::fuzzify(gu, 85).degrees[2] == 1.0);
}

TEST_CASE("out-of-universe input is clamped and flagged") {
  const auto gu = fzs::default_utilization_variable();
  const auto v = fzs::fuzzify(gu, 500);
  CHECK(v.clamped);
  CHECK(v.degrees == std::vector<double>{0.0, 0.0, 1.0});
  CHECK(fzs::fuzzify(gu, -3).clamped);
  CHECK_THROWS_AS(fzs::fuzzify(gu, std::nan("")), fzs::ValidationError);
}

TEST_CASE("linguistic variable invariants") {
  using fzs::LinguisticVariable;
  using fzs::Term;
  const auto tri = MembershipFunction::triangle;
  const auto trap = MembershipFunction::trapezoid;

  CHECK_THROWS_AS(LinguisticVariable("X", {10, 10, ""}, {{"A", trap(10, 10, 10, 10)}}),
                  fzs::ValidationError);
  CHECK_THROWS_WITH_AS(
      LinguisticVariable("X", {0, 10, ""}, {{"A", trap(0, 0, 5, 10)}, {"A", tri(0, 5, 10)}}),
      doctest::Contains("duplicate term label"), fzs::ValidationError);
  CHECK_THROWS_WITH_AS(LinguisticVariable("X", {0, 10, ""}, {{"A", trap(0, 0, 5, 12)}}),
                       doctest::Contains("outside the universe"), fzs::ValidationError);
  // L ends at 50 and H starts at 50: nothing covers x = 50.
  CHECK_THROWS_WITH_AS(
      LinguisticVariable("X", {0, 100, ""}, {{"L", trap(0, 0, 30, 50)}, {"H", trap(50, 70, 100, 100)}}),
      doctest::Contains("coverage gap"), fzs::ValidationError);
  // Triangle starting exactly at the lower bound leaves lo uncovered.
  CHECK_THROWS_WITH_AS(
      LinguisticVariable("X", {0, 100, ""}, {{"M", tri(0, 50, 100)}}),
      doctest::Contains("coverage gap"), fzs::ValidationError);
  CHECK_NOTHROW(LinguisticVariable("X", {0, 100, ""},
                                   {{"L", trap(0, 0, 30, 50)}, {"M", tri(30, 50, 70)},
                                    {"H", trap(50, 70, 100, 100)}}));
  CHECK_NOTHROW(fzs::default_temperature_variable());
  CHECK_NOTHROW(fzs::default_targets_variable());
  CHECK_NOTHROW(fzs::default_score_variable());
}
