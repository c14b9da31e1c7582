#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polarcp/geometry.hpp"

using namespace polarcp;

TEST_CASE("wrap_angle maps onto the principal branch") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));  // branch is (-pi, pi]
  CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(kTwoPi) == doctest::Approx(0.0));
  CHECK(wrap_angle(kPi + 0.5) == doctest::Approx(-kPi + 0.5));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    // Same point on the circle.
    CHECK(std::remainder(a - w, kTwoPi) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("circular_residual is the shortest arc distance") {
  CHECK(circular_residual(0.0, 0.0) == 0.0);
  CHECK(circular_residual(3.0, -3.0) == doctest::Approx(kTwoPi - 6.0));
  CHECK(circular_residual(-3.0, 3.0) == doctest::Approx(kTwoPi - 6.0));
  CHECK(circular_residual(0.25, -0.25) == doctest::Approx(0.5));
  CHECK(circular_residual(kPi, -kPi) == doctest::Approx(0.0));
  CHECK(circular_residual(0.0, kPi) == doctest::Approx(kPi));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    const double r = circular_residual(a, b);
    CHECK(r >= 0.0);
    CHECK(r <= kPi + 1e-15);
    CHECK(r == doctest::Approx(circular_residual(b, a)));  // symmetry
  }
}

TEST_CASE("polar round trip") {
  const MotionVector v{-0.3, -0.3};
  const PolarCoords p = to_polar(v);
  CHECK(p.angle == doctest::Approx(-0.75 * kPi).epsilon(1e-15));
  CHECK(p.magnitude == doctest::Approx(0.3 * std::sqrt(2.0)).epsilon(1e-15));

  CHECK(MotionVector{0.0, 0.0}.angle() == 0.0);
  CHECK(MotionVector{0.0, 0.0}.magnitude() == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(-kPi, kPi);
  std::uniform_real_distribution<double> um(1e-6, kMaxMagnitude);
  for (int i = 0; i < 1000; ++i) {
    const double angle = ua(rng), mag = um(rng);
    const PolarCoords q = to_polar(from_polar(angle, mag));
    CHECK(circular_residual(q.angle, angle) < 1e-12);
    CHECK(q.magnitude == doctest::Approx(mag).epsilon(1e-12));
  }
}

TEST_CASE("Interval validates and contains endpoints") {
  const Interval iv(1.0, 2.0);
  CHECK(iv.width() == doctest::Approx(1.0));
  CHECK(contains(iv, 1.0));
  CHECK(contains(iv, 2.0));
  CHECK(contains(iv, 1.5));
  CHECK_FALSE(contains(iv, 0.999));
  CHECK_FALSE(contains(iv, 2.001));

  CHECK_NOTHROW(Interval(1.0, 1.0));
  CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("CircularInterval wraps its center and caps its half width") {
  CHECK_THROWS_AS(CircularInterval(0.0, -0.1), std::invalid_argument);

  const CircularInterval wide(0.0, 4.0);
  CHECK(wide.half_width == doctest::Approx(kPi));  // capped: full circle

  const CircularInterval moved(3.0 * kPi, 0.1);
  CHECK(moved.center == doctest::Approx(kPi));

  const CircularInterval ci(3.1, 0.2);
  CHECK(circ_contains(ci, 3.1));
  CHECK(circ_contains(ci, 2.91));
  CHECK(circ_contains(ci, -3.1));  // reaches across the seam
  CHECK_FALSE(circ_contains(ci, 2.85));
  CHECK_FALSE(circ_contains(ci, 0.0));

  // Half width pi means everything is inside.
  const CircularInterval full(1.0, kPi);
  for (double theta : {-kPi, -2.0, 0.0, 1.0, 2.5, kPi}) {
    CHECK(circ_contains(full, theta));
  }

  // Zero width contains exactly the center direction.
  const CircularInterval point(0.5, 0.0);
  CHECK(circ_contains(point, 0.5));
  CHECK_FALSE(circ_contains(point, 0.5 + 1e-9));
}

TEST_CASE("circ_contains agrees with explicit arc membership") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ua(-kPi, kPi);
  std::uniform_real_distribution<double> uh(0.0, kPi);
  for (int i = 0; i < 2000; ++i) {
    const CircularInterval ci(ua(rng), uh(rng));
    const double theta = ua(rng);
    const bool expect = circular_residual(theta, ci.center) <= ci.half_width;
    CHECK(circ_contains(ci, theta) == expect);
  }
}
