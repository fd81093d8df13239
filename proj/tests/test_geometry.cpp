#include <doctest.h>

#include <cmath>

#include "ringflow/errors.hpp"
#include "ringflow/geometry.hpp"
#include "test_helpers.hpp"

using namespace ringflow;

TEST_CASE("unit square validates as convex") {
  auto square = ConvexRegion::make_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(validate_convex(square));
}

TEST_CASE("reflex vertex breaks convexity") {
  auto bent = ConvexRegion::make_polygon({{-1, -1}, {1, -1}, {0, 0}, {1, 1}, {-1, 1}});
  CHECK_FALSE(validate_convex(bent));
}

TEST_CASE("zero-radius disk is a valid degenerate region") {
  CHECK(validate_convex(ConvexRegion::make_disk({0.3, 0.4}, 0.0)));
  CHECK(validate_convex(ConvexRegion::make_point({1, 2})));
}

TEST_CASE("malformed regions raise a validation error") {
  CHECK_THROWS_AS(validate_convex(ConvexRegion::make_polygon({{0, 0}, {1, 0}})),
                  ValidationError);
  CHECK_THROWS_AS(validate_convex(ConvexRegion::make_disk({0, 0}, -0.5)),
                  ValidationError);
  CHECK_THROWS_AS(
      validate_convex(ConvexRegion::make_point({std::nan(""), 0})),
      ValidationError);
}

TEST_CASE("distance from square boundary to inner sets") {
  auto square = ConvexRegion::make_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(dist_between(square, ConvexRegion::make_point({0, 0})) == doctest::Approx(1.0));
  CHECK(dist_between(square, ConvexRegion::make_disk({0, 0}, 0.25)) ==
        doctest::Approx(0.75));
}

TEST_CASE("distance between concentric circles") {
  auto big = ConvexRegion::make_disk({0, 0}, 2.0);
  auto small = ConvexRegion::make_disk({0, 0}, 1.0);
  CHECK(dist_between(big, small) == doctest::Approx(1.0));
}

TEST_CASE("dist_between matches dense boundary sampling") {
  test_helpers::Rng rng(2024);
  auto brute = [](const ConvexRegion& a, const ConvexRegion& b) {
    BoundaryParam pa(a), pb(b);
    double best = 1e300;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      Vec2 p = pa.point_at(pa.total_length() * i / n);
      // exact point-to-set distance on the second side keeps this O(n)
      best = std::min(best, b.set_dist(p));
    }
    return best;
  };

  for (int trial = 0; trial < 4; ++trial) {
    double r_in = rng.uniform(0.2, 0.6);
    Vec2 c{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
    auto omega = ConvexRegion::make_polygon({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}});
    auto inner = ConvexRegion::make_disk(c, r_in);
    CHECK(std::abs(dist_between(omega, inner) - brute(omega, inner)) < 1e-6);
  }
}

TEST_CASE("normalize_ring keeps the unit square at gap one") {
  auto omega = ConvexRegion::make_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  auto ring = normalize_ring(omega, ConvexRegion::make_point({0, 0}));
  CHECK(ring.scale == doctest::Approx(1.0));
  CHECK(dist_between(ring.omega, ring.inner) == doctest::Approx(1.0));
}

TEST_CASE("normalize_ring halves the double square") {
  auto omega = ConvexRegion::make_polygon({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}});
  auto ring = normalize_ring(omega, ConvexRegion::make_point({0, 0}));
  CHECK(ring.scale == doctest::Approx(0.5));
  CHECK(ring.omega.vertices[0].x == doctest::Approx(-1.0));
}

TEST_CASE("normalize_ring scales concentric disks 4/2 to 2/1") {
  auto ring = normalize_ring(ConvexRegion::make_disk({0, 0}, 4.0),
                             ConvexRegion::make_disk({0, 0}, 2.0));
  CHECK(ring.scale == doctest::Approx(0.5));
  CHECK(ring.omega.radius == doctest::Approx(2.0));
  CHECK(ring.inner.radius == doctest::Approx(1.0));
}

TEST_CASE("normalize_ring is idempotent") {
  test_helpers::Rng rng(77);
  for (int trial = 0; trial < 6; ++trial) {
    double half = rng.uniform(1.5, 4.0);
    auto omega = ConvexRegion::make_polygon(
        {{-half, -half}, {half, -half}, {half, half}, {-half, half}});
    auto inner = ConvexRegion::make_disk({rng.uniform(-0.3, 0.3), 0}, rng.uniform(0.1, 0.5));
    auto ring = normalize_ring(omega, inner);
    auto again = normalize_ring(ring.omega, ring.inner);
    CHECK(again.scale == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("normalize_ring rejects bad containment") {
  auto omega = ConvexRegion::make_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK_THROWS_AS(normalize_ring(omega, ConvexRegion::make_point({3, 0})),
                  ContainmentError);
  CHECK_THROWS_AS(normalize_ring(omega, ConvexRegion::make_disk({0, 0}, 1.0)),
                  DegenerateGapError);
}

TEST_CASE("boundary parameterization is monotone and closes") {
  auto hex = make_preset_ring("ngon(6)").omega;
  BoundaryParam param(hex);
  const auto& segs = param.segments();
  REQUIRE(segs.size() == 6);
  double prev = 0;
  for (auto& s : segs) {
    CHECK(s.s_begin == doctest::Approx(prev));
    CHECK(s.s_end > s.s_begin);
    prev = s.s_end;
  }
  CHECK(prev == doctest::Approx(param.total_length()));
  CHECK(dist(param.point_at(0), param.point_at(param.total_length())) < 1e-12);
}

TEST_CASE("inward normals point into the region") {
  for (const char* preset : {"square", "annulus", "ngon(6)"}) {
    auto ring = make_preset_ring(preset);
    BoundaryParam param(ring.omega);
    for (int k = 0; k < 37; ++k) {
      double s = param.total_length() * k / 37.0;
      Vec2 p = param.point_at(s) + param.inward_normal_at(s) * 1e-6;
      CHECK(ring.omega.contains(p));
    }
  }
}

TEST_CASE("inscribed polygon approximates its disk") {
  auto disk = ConvexRegion::make_disk({0.5, -0.25}, 2.0);
  auto poly = inscribed_polygon(disk, 64);
  CHECK(validate_convex(poly));
  for (Vec2 v : poly.vertices) CHECK(dist(v, disk.center) == doctest::Approx(2.0));
}
