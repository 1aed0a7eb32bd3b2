#pragma once

#include <cmath>

#include "expedition/core/geometry.hpp"

namespace expedition::env {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double heading = 0.0;  // rad, [0, 2*pi)
};

/// One low-level action: commanded absolute heading, a depth change from
/// {-d_step, 0, +d_step}, and a fixed duration.
struct MotionPrimitive {
  double heading = 0.0;      // rad
  double delta_depth = 0.0;  // m
  double duration = 30.0;    // s
};

struct VehicleLimits {
  double speed = 1.0;             // m/s
  double omega_max = kPi / 60.0;  // rad/s
  double d_step = 10.0;           // m per depth move
  double duration = 30.0;         // s per primitive
};

struct StepResult {
  Pose pose;
  bool clipped = false;
};

/// Deterministic vehicle transition: turn (clamped to omega_max * duration),
/// travel speed * duration straight at the realized heading, change depth,
/// clip to the box.
inline StepResult step(const Pose& pose, const MotionPrimitive& a, const Box& box,
                       double speed, double omega_max) {
  const double want = wrap_pi(a.heading - pose.heading);
  const double limit = omega_max * a.duration;
  const double turn = std::clamp(want, -limit, limit);
  const double h = wrap_two_pi(pose.heading + turn);
  Point p{pose.x + speed * a.duration * std::cos(h),
          pose.y + speed * a.duration * std::sin(h),
          pose.z + a.delta_depth};
  const Point q = box.clip(p);
  const bool clipped = (q.x != p.x) || (q.y != p.y) || (q.z != p.z);
  return {Pose{q.x, q.y, q.z, h}, clipped};
}

}  // namespace expedition::env
