#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "expedition/belief/gp.hpp"
#include "expedition/belief/max_value.hpp"
#include "expedition/core/rng.hpp"
#include "expedition/env/kinematics.hpp"
#include "expedition/phumes/lawnmower.hpp"
#include "expedition/planner/config.hpp"
#include "expedition/planner/gp_model.hpp"
#include "expedition/planner/mvi.hpp"

namespace expedition::planner {

struct PolicyContext {
  Box box;
  env::VehicleLimits vehicle;
  const std::vector<phumes::TimedWaypoint>* lawnmower = nullptr;  // lawnmower_fixed only
};

/// Discounted return of a reward trace: sum_t gamma^t r_t.
inline double episode_value(std::span<const double> rewards, double gamma) {
  double g = 0.0, f = 1.0;
  for (double r : rewards) {
    g += f * r;
    f *= gamma;
  }
  return g;
}

/* Non-search policies.
 *   random          — uniform heading, level flight.
 *   greedy_myopic   — argmax of the max-value information reward at the
 *                     realized endpoint of 16 evenly spaced headings.
 *   lawnmower_fixed — steers at the precomputed survey's position one
 *                     primitive ahead; ignores the belief entirely.
 */
inline env::MotionPrimitive baseline_action(PolicyKind kind, const belief::GPBelief& b,
                                            const env::Pose& pose, double t,
                                            const PlannerConfig& cfg, const PolicyContext& ctx,
                                            Rng& rng) {
  const env::VehicleLimits& veh = ctx.vehicle;
  switch (kind) {
    case PolicyKind::random:
      return {rng.uniform(0.0, kTwoPi), 0.0, veh.duration};

    case PolicyKind::greedy_myopic: {
      const auto lattice = reachable_lattice(pose, t, veh, ctx.box, cfg.horizon);
      const auto maxvals =
          belief::sample_max_values(b, lattice, static_cast<std::size_t>(cfg.m_maxvals), rng);
      double best_r = -1.0;
      double best_h = pose.heading;
      for (int i = 0; i < 16; ++i) {
        const double h = kTwoPi * i / 16.0;
        const env::MotionPrimitive a{h, 0.0, veh.duration};
        const env::Pose next = env::step(pose, a, ctx.box, veh.speed, veh.omega_max).pose;
        const auto mv = b.predict({next.x, next.y, next.z, t + veh.duration});
        const double r = mvi_reward(mv.mean, std::sqrt(mv.var), maxvals);
        if (r > best_r) {
          best_r = r;
          best_h = h;
        }
      }
      return {best_h, 0.0, veh.duration};
    }

    case PolicyKind::lawnmower_fixed: {
      if (!ctx.lawnmower || ctx.lawnmower->empty())
        throw ValidationError("lawnmower_fixed: no precomputed waypoint path");
      const Point target = phumes::lawnmower_position(*ctx.lawnmower, t + veh.duration);
      const double dx = target.x - pose.x, dy = target.y - pose.y;
      const double heading =
          (dx * dx + dy * dy > 1e-12) ? wrap_two_pi(std::atan2(dy, dx)) : pose.heading;
      const double dz = target.z - pose.z;
      double dd = 0.0;
      if (std::abs(dz) >= 0.5 * veh.d_step) dd = (dz > 0.0 ? veh.d_step : -veh.d_step);
      return {heading, dd, veh.duration};
    }

    case PolicyKind::mcts:
      throw ValidationError("baseline_action: mcts is handled by plan_mcts");
  }
  throw ValidationError("baseline_action: unknown policy kind");
}

}  // namespace expedition::planner
