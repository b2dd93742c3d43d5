#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "boolnet/geometry.hpp"
#include "boolnet/rng.hpp"

using namespace boolnet;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("domain invariants") {
  CHECK_THROWS_AS(Domain({0.0, 0.0}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Domain({}, {}), std::invalid_argument);
  const Domain dom = Domain::box(3, 2.0);
  CHECK(dom.volume() == doctest::Approx(8.0));
  CHECK(dom.contains(std::vector<double>{0.0, 2.0, 1.0}));
  CHECK_FALSE(dom.contains(std::vector<double>{-0.1, 0.5, 0.5}));
}

TEST_CASE("ball intersection follows the closed-ball convention") {
  const Domain dom = Domain::box(2, 10.0);
  const Ball a({1.0, 1.0}, 1.0);
  SUBCASE("identical centers always intersect") {
    CHECK(ball_intersects(a, Ball({1.0, 1.0}, 0.0), dom));
  }
  SUBCASE("tangent balls connect") {
    CHECK(ball_intersects(a, Ball({3.0, 1.0}, 1.0), dom));
  }
  SUBCASE("distance 3 with unit radii does not") {
    CHECK_FALSE(ball_intersects(a, Ball({4.0, 1.0}, 1.0), dom));
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(ball_intersects(a, Ball({0.0, 0.0, 0.0}, 1.0), dom),
                    std::invalid_argument);
  }
}

TEST_CASE("minkowski difference volumes") {
  const Ball b1({0.0, 0.0, 0.0}, 1.0);
  const Ball b2({5.0, 0.0, 0.0}, 1.0);
  CHECK(minkowski_diff_volume(b1, b2) ==
        doctest::Approx(4.0 / 3.0 * M_PI * 8.0).epsilon(1e-12));
  CHECK(minkowski_diff_volume(Ball({0.0, 0.0, 0.0}, 0.0), Ball({1.0, 1.0, 1.0}, 0.0)) ==
        0.0);
  CHECK(minkowski_diff_volume(Ball({0.0, 0.0}, 1.0), Ball({0.0, 0.0}, 2.0)) ==
        doctest::Approx(9.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("intersection is symmetric and volume is monotone") {
  Rng rng(20240801);
  const Domain dom = Domain::box(3, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Ball a({rng.uniform(), rng.uniform(), rng.uniform()}, rng.uniform(0.0, 0.3));
    Ball b({rng.uniform(), rng.uniform(), rng.uniform()}, rng.uniform(0.0, 0.3));
    CHECK(ball_intersects(a, b, dom) == ball_intersects(b, a, dom));
    CHECK(minkowski_diff_volume(a, b) == minkowski_diff_volume(b, a));
    Ball bigger = b;
    bigger.radius += rng.uniform(0.0, 0.2);
    CHECK(minkowski_diff_volume(a, bigger) >= minkowski_diff_volume(a, b));
  }
}

TEST_CASE("periodic distance agrees away from the faces and wraps near them") {
  const Domain bounded = Domain::box(2, 1.0, Topology::bounded);
  const Domain torus = Domain::box(2, 1.0, Topology::periodic);
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    // Interior points with small radii: both topologies agree.
    Ball a({rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)}, rng.uniform(0.0, 0.1));
    Ball b({rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)}, rng.uniform(0.0, 0.1));
    CHECK(ball_intersects(a, b, bounded) == ball_intersects(a, b, torus));
  }
  // Across the seam only the torus connects.
  const Ball left({0.05, 0.5}, 0.04);
  const Ball right({0.95, 0.5}, 0.07);
  CHECK_FALSE(ball_intersects(left, right, bounded));
  CHECK(ball_intersects(left, right, torus));
}

TEST_SUITE_END();
