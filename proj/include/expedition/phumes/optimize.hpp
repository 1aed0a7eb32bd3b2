#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "expedition/core/error.hpp"
#include "expedition/core/rng.hpp"
#include "expedition/phumes/grid.hpp"
#include "expedition/phumes/lawnmower.hpp"

namespace expedition::phumes {

/// Expected number of in-plume measurements along a timestamped path:
/// sum of cell probabilities at each waypoint, zero outside the grid.
inline double expected_inplume(const ForecastGrid& grid, std::span<const TimedWaypoint> wps) {
  if (wps.empty()) throw ValidationError("expected_inplume: empty waypoint list");
  double s = 0.0;
  for (const auto& w : wps) s += grid.lookup(w.p, w.t);
  return s;
}

struct OptimizerConfig {
  int origins_per_axis = 8;  // stage-1 origin grid
  int orientations = 8;      // stage-1 azimuths over [0, 2*pi)
  int scales = 4;            // stage-1 leg lengths
  int halvings = 2;          // coordinate-descent step halvings
  int max_sweeps = 40;       // safety cap per step level
};

inline void to_json(nlohmann::json& j, const OptimizerConfig& c) {
  j = nlohmann::json{{"origins_per_axis", c.origins_per_axis},
                     {"orientations", c.orientations},
                     {"scales", c.scales},
                     {"halvings", c.halvings},
                     {"max_sweeps", c.max_sweeps}};
}
inline void from_json(const nlohmann::json& j, OptimizerConfig& c) {
  c.origins_per_axis = j.value("origins_per_axis", c.origins_per_axis);
  c.orientations = j.value("orientations", c.orientations);
  c.scales = j.value("scales", c.scales);
  c.halvings = j.value("halvings", c.halvings);
  c.max_sweeps = j.value("max_sweeps", c.max_sweeps);
}

struct OptResult {
  LawnmowerSpec spec;
  double score = 0.0;
};

namespace detail {

inline std::optional<double> try_score(const ForecastGrid& grid, const OpConstraints& c,
                                       const LawnmowerSpec& s) {
  try {
    const auto wps = lawnmower_waypoints(s, c);
    return expected_inplume(grid, wps);
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

/// Leg count that fills the time budget for a given leg length and spacing.
inline int budget_legs(const OpConstraints& c, double leg, double spacing) {
  const double reach = c.speed * c.t_budget;
  return static_cast<int>(std::floor((reach + spacing) / (leg + spacing)));
}

/// z level carrying the most total forecast probability; grid z0 band middle
/// when the grid is empty.
inline double best_mass_depth(const ForecastGrid& grid, const OpConstraints& c) {
  const GridSpec& g = grid.spec;
  double best_mass = -1.0;
  double best_z = 0.5 * (c.depth_min + c.depth_max);
  for (int iz = 0; iz < g.nz; ++iz) {
    const double z = g.z0 + (iz + 0.5) * g.dz;
    if (z < c.depth_min || z > c.depth_max) continue;
    double m = 0.0;
    for (int it = 0; it < g.nt; ++it)
      for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) m += grid.at(ix, iy, iz, it);
    if (m > best_mass) {
      best_mass = m;
      best_z = z;
    }
  }
  return best_z;
}

}  // namespace detail

/* Two-stage lawnmower scaling against a forecast grid.
 *
 * Stage 1 scores a coarse candidate set: an origins x orientations x scales
 * grid (spacing = leg/8, leg count filling the budget, depth at the grid's
 * highest-mass level) plus the default centered survey as a seed candidate.
 * Stage 2 runs coordinate descent on every spec field (origin, azimuth, leg
 * length, spacing, leg count, depth) with steps halved `halvings` times,
 * accepting only feasible strict improvements, so the returned score is at
 * least every stage-1 candidate's and never decreases between iterates.
 * The search is deterministic; the rng parameter is reserved for stochastic
 * candidate schemes and is unused by the default configuration.
 */
inline OptResult optimize_lawnmower(const ForecastGrid& grid, const OpConstraints& c,
                                    const OptimizerConfig& cfg, Rng& /*rng*/) {
  validate(c);
  validate(grid.spec);

  std::optional<OptResult> best;
  // returns true only when the candidate is feasible and strictly improves
  auto consider = [&](const LawnmowerSpec& s) {
    if (auto sc = detail::try_score(grid, c, s)) {
      if (!best || *sc > best->score) {
        best = OptResult{s, *sc};
        return true;
      }
    }
    return false;
  };

  const double z_seed = detail::best_mass_depth(grid, c);
  consider(default_centered_lawnmower(c, z_seed));

  const double span = std::min(c.box.x_span(), c.box.y_span());
  for (int si = 0; si < cfg.scales; ++si) {
    const double leg = 0.9 * span / static_cast<double>(1 << si);
    const double spacing = leg / 8.0;
    const int n_legs = std::max(1, detail::budget_legs(c, leg, spacing));
    for (int oi = 0; oi < cfg.orientations; ++oi) {
      const double chi = kTwoPi * oi / cfg.orientations;
      for (int gy = 0; gy < cfg.origins_per_axis; ++gy) {
        for (int gx = 0; gx < cfg.origins_per_axis; ++gx) {
          LawnmowerSpec s;
          s.origin = {c.box.x_min + (gx + 0.5) * c.box.x_span() / cfg.origins_per_axis,
                      c.box.y_min + (gy + 0.5) * c.box.y_span() / cfg.origins_per_axis};
          s.chi = chi;
          s.leg_length = leg;
          s.spacing = spacing;
          s.n_legs = n_legs;
          s.depth = z_seed;
          s.start_time = grid.spec.t0;
          consider(s);
        }
      }
    }
  }
  if (!best) throw InfeasibleError("optimize_lawnmower: no feasible candidate under constraints");

  // stage 2: coordinate descent
  double step_xy = c.box.x_span() / (2.0 * cfg.origins_per_axis);
  double step_chi = kPi / cfg.orientations;
  double step_scale = 0.25;
  double step_z = 0.25 * (c.depth_max - c.depth_min);
  for (int level = 0; level <= cfg.halvings; ++level) {
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      bool improved = false;
      for (int dir = -1; dir <= 1; dir += 2) {
        LawnmowerSpec s = best->spec;
        s.origin.x += dir * step_xy;
        improved |= consider(s);
        s = best->spec;
        s.origin.y += dir * step_xy;
        improved |= consider(s);
        s = best->spec;
        s.chi = wrap_two_pi(s.chi + dir * step_chi);
        improved |= consider(s);
        s = best->spec;
        s.leg_length *= (1.0 + dir * step_scale);
        s.n_legs = std::max(1, detail::budget_legs(c, s.leg_length, s.spacing));
        improved |= consider(s);
        s = best->spec;
        s.spacing *= (1.0 + dir * step_scale);
        improved |= consider(s);
        s = best->spec;
        s.n_legs += dir;
        improved |= (s.n_legs >= 1) && consider(s);
        s = best->spec;
        s.depth = std::clamp(s.depth + dir * step_z, c.depth_min, c.depth_max);
        improved |= consider(s);
      }
      if (!improved) break;
    }
    step_xy *= 0.5;
    step_chi *= 0.5;
    step_scale *= 0.5;
    step_z *= 0.5;
  }
  return *best;
}

}  // namespace expedition::phumes
