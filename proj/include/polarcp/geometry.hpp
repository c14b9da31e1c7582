#pragma once

// Polar geometry for 2-D motion vectors. Angles live on (-pi, pi], magnitudes
// are normalized so that the largest representable displacement (one full
// image diagonal) has magnitude sqrt(2).

#include <cmath>
#include <stdexcept>

namespace polarcp {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kMaxMagnitude = 1.4142135623730951;  // sqrt(2)

// Maps any angle to the principal branch (-pi, pi]. std::remainder returns
// values in [-pi, pi]; the single boundary case -pi is remapped to pi so the
// branch is half-open.
inline double wrap_angle(double a) {
  double w = std::remainder(a, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

struct MotionVector {
  double dx = 0.0;
  double dy = 0.0;

  double magnitude() const { return std::hypot(dx, dy); }

  // Zero vectors get angle 0 by convention; atan2(0, 0) is not portable.
  double angle() const {
    if (dx == 0.0 && dy == 0.0) return 0.0;
    return std::atan2(dy, dx);
  }
};

struct PolarCoords {
  double angle = 0.0;      // radians in (-pi, pi]
  double magnitude = 0.0;  // >= 0
};

inline PolarCoords to_polar(const MotionVector& v) {
  return {v.angle(), v.magnitude()};
}

inline MotionVector from_polar(double angle, double magnitude) {
  return {magnitude * std::cos(angle), magnitude * std::sin(angle)};
}

// Shortest arc distance between two angles, in [0, pi]. Inputs need not be
// pre-wrapped.
inline double circular_residual(double a, double b) {
  return std::abs(std::remainder(a - b, kTwoPi));
}

// Closed interval on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo <= hi)) throw std::invalid_argument("Interval: lo must be <= hi");
  }

  double width() const { return hi - lo; }
};

inline bool contains(const Interval& iv, double y) {
  return iv.lo <= y && y <= iv.hi;
}

// Arc on the circle, stored as (center, half_width) to sidestep wraparound
// bookkeeping. half_width == pi denotes the full circle.
struct CircularInterval {
  double center = 0.0;
  double half_width = 0.0;

  CircularInterval() = default;
  CircularInterval(double center_, double half_width_) {
    if (!(half_width_ >= 0.0))
      throw std::invalid_argument("CircularInterval: half_width must be >= 0");
    center = wrap_angle(center_);
    half_width = std::min(half_width_, kPi);
  }

  double width() const { return 2.0 * half_width; }
};

inline bool circ_contains(const CircularInterval& ci, double theta) {
  return circular_residual(theta, ci.center) <= ci.half_width;
}

}  // namespace polarcp
