#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "expedition/belief/gp.hpp"
#include "expedition/belief/max_value.hpp"
#include "expedition/core/geometry.hpp"
#include "expedition/core/rng.hpp"
#include "expedition/env/kinematics.hpp"
#include "expedition/planner/config.hpp"
#include "expedition/planner/mcts.hpp"
#include "expedition/planner/mvi.hpp"

namespace expedition::planner {

/// Horizontal lattice of candidate sample sites reachable within the horizon:
/// spacing = one primitive's travel, radius = speed * duration * H, at the
/// pose's depth and the current time slice.
inline std::vector<SpacetimePoint> reachable_lattice(const env::Pose& pose, double t,
                                                     const env::VehicleLimits& veh,
                                                     const Box& box, int horizon) {
  const double spacing = veh.speed * veh.duration;
  const double radius = spacing * horizon;
  const int n = horizon;
  std::vector<SpacetimePoint> pts;
  for (int iy = -n; iy <= n; ++iy) {
    for (int ix = -n; ix <= n; ++ix) {
      const double dx = ix * spacing, dy = iy * spacing;
      if (dx * dx + dy * dy > radius * radius + 1e-9) continue;
      const Point p = box.clip({pose.x + dx, pose.y + dy, pose.z});
      pts.push_back({p.x, p.y, p.z, t});
    }
  }
  return pts;
}

struct GpPlanState {
  belief::GPBelief belief;
  env::Pose pose;
  double t = 0.0;
};

/* Belief-MDP over GP fantasies: a step moves the vehicle, fantasizes the
 * observation it would collect there (posterior sample or posterior mean),
 * folds it into the simulated belief, and pays the max-value information
 * reward of the pre-update posterior at that point. Rollouts score random
 * headings against the leaf belief without further updates.
 */
class GpPlanModel {
public:
  using State = GpPlanState;
  using Action = env::MotionPrimitive;

  GpPlanModel(const Box& box, const env::VehicleLimits& veh, FantasyMode mode,
              std::vector<double> maxvals, bool allow_depth_moves = true,
              std::vector<double> fixed_headings = {})
      : box_(box),
        veh_(veh),
        mode_(mode),
        maxvals_(std::move(maxvals)),
        allow_depth_(allow_depth_moves),
        headings_(std::move(fixed_headings)) {}

  int max_actions() const { return headings_.empty() ? 0 : static_cast<int>(headings_.size()); }

  Action propose(const State&, int child_count, Rng& rng) {
    Action a;
    a.heading = headings_.empty() ? rng.uniform(0.0, kTwoPi) : headings_[child_count];
    a.delta_depth = allow_depth_ ? (rng.uniform_int(3) - 1) * veh_.d_step : 0.0;
    a.duration = veh_.duration;
    return a;
  }

  double step(State& s, const Action& a, Rng& rng) {
    s.pose = env::step(s.pose, a, box_, veh_.speed, veh_.omega_max).pose;
    s.t += a.duration;
    const SpacetimePoint q{s.pose.x, s.pose.y, s.pose.z, s.t};
    const belief::MeanVar mv = s.belief.predict(q);
    const double reward = mvi_reward(mv.mean, std::sqrt(mv.var), maxvals_);
    const double sn = s.belief.hyper().sigma_n;
    const double y = (mode_ == FantasyMode::sampled)
                         ? mv.mean + std::sqrt(mv.var + sn * sn) * rng.gaussian()
                         : mv.mean;
    s.belief.add(q, y);
    return reward;
  }

  double rollout(State& s, int steps, double gamma, Rng& rng) {
    double g = 0.0, f = 1.0;
    env::Pose p = s.pose;
    double t = s.t;
    for (int i = 0; i < steps; ++i) {
      const Action a{rng.uniform(0.0, kTwoPi), 0.0, veh_.duration};
      p = env::step(p, a, box_, veh_.speed, veh_.omega_max).pose;
      t += veh_.duration;
      const belief::MeanVar mv = s.belief.predict({p.x, p.y, p.z, t});
      g += f * mvi_reward(mv.mean, std::sqrt(mv.var), maxvals_);
      f *= gamma;
    }
    return g;
  }

private:
  Box box_;
  env::VehicleLimits veh_;
  FantasyMode mode_;
  std::vector<double> maxvals_;
  bool allow_depth_;
  std::vector<double> headings_;
};

struct PlanTelemetry {
  int simulations = 0;
  int tree_nodes = 0;
  double root_q = 0.0;
  int root_visits = 0;
  mcts::TreeAudit audit;
};

struct PlanResult {
  env::MotionPrimitive action;
  PlanTelemetry telemetry;
};

/// One online planning call. Draws the max-value samples once over the
/// reachable lattice, then runs the progressively-widened search. The
/// caller's belief is copied, never mutated. Deterministic given the seed.
inline PlanResult plan_mcts(const belief::GPBelief& b, const env::Pose& pose, double t,
                            const PlannerConfig& cfg, const Box& box,
                            const env::VehicleLimits& veh, Rng& rng,
                            bool allow_depth_moves = true) {
  validate(cfg);
  const auto lattice = reachable_lattice(pose, t, veh, box, cfg.horizon);
  auto maxvals = belief::sample_max_values(b, lattice, static_cast<std::size_t>(cfg.m_maxvals), rng);
  GpPlanModel model(box, veh, cfg.fantasy_mode, std::move(maxvals), allow_depth_moves);
  GpPlanState root{b, pose, t};
  const auto res = mcts::search(model, root, cfg, rng);
  PlanResult out;
  out.action = res.action;
  out.telemetry.simulations = res.simulations;
  out.telemetry.tree_nodes = res.audit.nodes;
  out.telemetry.root_q = res.root_q;
  out.telemetry.root_visits = res.root_visits;
  out.telemetry.audit = res.audit;
  return out;
}

}  // namespace expedition::planner
