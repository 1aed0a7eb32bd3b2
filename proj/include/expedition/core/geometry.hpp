#pragma once

#include <algorithm>
#include <cmath>

namespace expedition {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct SpacetimePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;
};

/// Axis-aligned operating volume. z is height above the seafloor.
struct Box {
  double x_min = -1000.0, x_max = 1000.0;
  double y_min = -1000.0, y_max = 1000.0;
  double z_min = 0.0, z_max = 400.0;

  bool contains(const Point& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max &&
           p.z >= z_min && p.z <= z_max;
  }
  Point clip(const Point& p) const {
    return {std::clamp(p.x, x_min, x_max), std::clamp(p.y, y_min, y_max),
            std::clamp(p.z, z_min, z_max)};
  }
  double x_span() const { return x_max - x_min; }
  double y_span() const { return y_max - y_min; }
  double z_span() const { return z_max - z_min; }
};

/// Wrap to [0, 2*pi).
inline double wrap_two_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

/// Wrap to (-pi, pi].
inline double wrap_pi(double a) {
  a = wrap_two_pi(a);
  if (a > kPi) a -= kTwoPi;
  return a;
}

}  // namespace expedition
