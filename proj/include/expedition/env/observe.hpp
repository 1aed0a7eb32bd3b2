#pragma once

#include <cmath>

#include "expedition/core/error.hpp"
#include "expedition/core/rng.hpp"
#include "expedition/env/kinematics.hpp"
#include "expedition/env/plume.hpp"

namespace expedition::env {

/// One timestamped two-channel point reading. Noisy values may be negative.
struct Observation {
  double x = 0.0, y = 0.0, z = 0.0;
  double t = 0.0;
  double reactive = 0.0;   // dORP-like channel
  double turbidity = 0.0;  // OBS-like (conserved) channel
};

/// Sample both sensors at the pose: truth plus independent N(0, sigma^2)
/// noise per channel (reactive drawn first).
inline Observation observe(const VentParams& theta, const Pose& pose, double t,
                           double sigma_sensor, Rng& rng) {
  if (!(sigma_sensor >= 0.0)) throw ValidationError("sigma_sensor: must be >= 0");
  const TracerPair c = concentration(theta, {pose.x, pose.y, pose.z}, t);
  Observation o;
  o.x = pose.x;
  o.y = pose.y;
  o.z = pose.z;
  o.t = t;
  o.reactive = c.reactive + sigma_sensor * rng.gaussian();
  o.turbidity = c.conserved + sigma_sensor * rng.gaussian();
  return o;
}

}  // namespace expedition::env
