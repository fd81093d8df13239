#include <doctest.h>

#include <cmath>

#include "ringflow/closed_forms.hpp"
#include "ringflow/errors.hpp"
#include "test_helpers.hpp"

using namespace ringflow;

TEST_CASE("punctured-disk potential values") {
  // 1 - r^(2/3) at p = 4 on the unit disk.
  CHECK(radial_potential(4, 0, 1, 0.25) ==
        doctest::Approx(1.0 - std::pow(0.25, 2.0 / 3.0)).epsilon(1e-14));
  CHECK(radial_potential(4, 0, 1, 0.25) == doctest::Approx(0.60315).epsilon(1e-4));
  CHECK(radial_potential(p_infinity, 0, 1, 0.3) == doctest::Approx(0.7));
}

TEST_CASE("boundary values are exact for any exponent") {
  for (double p : {2.5, 4.0, 8.0, 64.0}) {
    CHECK(radial_potential(p, 1, 2, 2.0) == doctest::Approx(0.0));
    CHECK(radial_potential(p, 1, 2, 1.0) == doctest::Approx(1.0));
  }
  CHECK(radial_potential(p_infinity, 1, 2, 2.0) == doctest::Approx(0.0));
  CHECK(radial_potential(p_infinity, 1, 2, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("radial speed closed forms") {
  CHECK(radial_speed(p_infinity, 1, 2, 1.7) == doctest::Approx(1.0));
  CHECK(radial_speed(4, 0, 1, 1.0) == doctest::Approx(2.0 / 3.0));
  // r^(-1/3) blowup toward the puncture
  double s1 = radial_speed(4, 0, 1, 1e-3);
  double s2 = radial_speed(4, 0, 1, 8e-3);
  CHECK(s1 / s2 == doctest::Approx(2.0).epsilon(1e-9)); // (1/8)^(-1/3) = 2
  CHECK_THROWS_AS(radial_speed(4, 0, 1, 0.0), DomainError);
}

TEST_CASE("radius outside the ring is rejected") {
  CHECK_THROWS_AS(radial_potential(4, 1, 2, 0.5), DomainError);
  CHECK_THROWS_AS(radial_potential(4, 1, 2, 2.5), DomainError);
}

TEST_CASE("radial potential decreases and hits both boundary values") {
  test_helpers::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    double a = rng.uniform(0.0, 1.0);
    double R = a + rng.uniform(0.5, 2.0);
    double p = rng.uniform(2.1, 120.0);
    double prev = radial_potential(p, a, R, a);
    CHECK(prev == doctest::Approx(1.0));
    for (int k = 1; k <= 16; ++k) {
      double r = a + (R - a) * k / 16.0;
      double v = radial_potential(p, a, R, r);
      CHECK(v < prev + 1e-12);
      prev = v;
    }
    CHECK(prev == doctest::Approx(0.0));
  }
}

TEST_CASE("radial speed matches a central difference of the potential") {
  test_helpers::Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    double a = rng.uniform(0.0, 1.0);
    double R = a + rng.uniform(0.5, 2.0);
    double p = rng.uniform(2.2, 100.0);
    double r = rng.uniform(a + 0.05 * (R - a), R - 1e-5 * (R - a));
    const double step = 1e-5;
    double numeric = (radial_potential(p, a, R, r - step) -
                      radial_potential(p, a, R, r + step)) /
                     (2 * step);
    CHECK(std::abs(numeric - radial_speed(p, a, R, r)) < 1e-8);
  }
}

TEST_CASE("large p approaches the cone potential") {
  double sup = 0;
  for (int k = 0; k <= 400; ++k) {
    double r = 1.0 + k / 400.0;
    sup = std::max(sup, std::abs(radial_potential(64, 1, 2, r) -
                                 radial_potential(p_infinity, 1, 2, r)));
  }
  CHECK(sup < 0.02);
}

TEST_CASE("log-form at p = 2 connects to the power form") {
  // The p -> 2 limit of the power-law ring potential is logarithmic.
  double near2 = radial_potential(2.0 + 1e-9, 1, 2, 1.5);
  double log2 = radial_potential(2.0, 1, 2, 1.5);
  CHECK(near2 == doctest::Approx(log2).epsilon(1e-6));
  CHECK(log2 == doctest::Approx(std::log(2.0 / 1.5) / std::log(2.0)));
}

TEST_CASE("square ridge oracle geometry") {
  auto oracle = square_ridge_oracle(1.0);
  REQUIRE(oracle.segments().size() == 4);
  CHECK(oracle.on_ridge({0.5, 0.5}));
  CHECK_FALSE(oracle.on_ridge({0.5, 0.4}));
  CHECK(oracle.distance_to({0.5, 0.4}) == doctest::Approx(0.1 / std::sqrt(2.0)));

  auto scaled = square_ridge_oracle(2.0);
  CHECK(scaled.on_ridge({1.5, -1.5}));
  CHECK(scaled.segments()[0].first.x == doctest::Approx(2.0));
}
