#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "expedition/core/error.hpp"
#include "expedition/core/geometry.hpp"

namespace expedition::phumes {

/// Boustrophedon survey: n_legs legs of length L along azimuth chi, joined by
/// cross-steps of length s, flown at constant depth starting at start_time.
struct LawnmowerSpec {
  Vec2 origin{0.0, 0.0};    // first leg start
  double chi = 0.0;         // rad, leg azimuth
  double leg_length = 0.0;  // m
  double spacing = 0.0;     // m between legs
  int n_legs = 1;
  double depth = 0.0;       // m
  double start_time = 0.0;  // s
};

/// Vehicle and ship limits the survey must respect.
struct OpConstraints {
  Box box;
  double t_budget = 14400.0;  // s
  double speed = 1.0;         // m/s
  double delta = 30.0;        // m between measurements along the path
  double depth_min = 40.0;    // m, allowed depth band
  double depth_max = 360.0;
};

inline void validate(const OpConstraints& c) {
  if (!(c.t_budget > 0.0)) throw ValidationError("constraints.T_budget: must be > 0");
  if (!(c.delta > 0.0)) throw ValidationError("constraints.delta: must be > 0");
  if (!(c.speed > 0.0)) throw ValidationError("constraints.speed: must be > 0");
  if (!(c.depth_min <= c.depth_max))
    throw ValidationError("constraints.depth band: min > max");
}

struct TimedWaypoint {
  Point p;
  double t = 0.0;
};

inline double path_length(const LawnmowerSpec& s) {
  return s.leg_length * s.n_legs + s.spacing * (s.n_legs - 1);
}

/// Throws InfeasibleError naming the violated constraint; no-op when feasible.
inline void check_feasible(const LawnmowerSpec& s, const OpConstraints& c) {
  if (!(s.leg_length > 0.0)) throw InfeasibleError("lawnmower: leg_length must be > 0");
  if (!(s.spacing > 0.0)) throw InfeasibleError("lawnmower: spacing must be > 0");
  if (s.n_legs < 1) throw InfeasibleError("lawnmower: n_legs must be >= 1");
  if (!(s.start_time >= 0.0)) throw InfeasibleError("lawnmower: start_time must be >= 0");
  if (path_length(s) > c.speed * c.t_budget + 1e-9)
    throw InfeasibleError("lawnmower: path length exceeds speed * T_budget");
  if (s.depth < c.depth_min || s.depth > c.depth_max)
    throw InfeasibleError("lawnmower: depth outside allowed band");
  const Vec2 u{std::cos(s.chi), std::sin(s.chi)};
  const Vec2 w{-std::sin(s.chi), std::cos(s.chi)};
  for (int leg = 0; leg < s.n_legs; ++leg) {
    for (int end = 0; end < 2; ++end) {
      const double along = (end == 0) ? 0.0 : s.leg_length;
      const Vec2 v = s.origin + u * along + w * (s.spacing * leg);
      if (!c.box.contains({v.x, v.y, s.depth}))
        throw InfeasibleError("lawnmower: waypoint outside operating box");
    }
  }
}

/* Timestamped sample points along the survey: every segment (leg or
 * cross-step) is sampled every delta meters and both endpoints of every leg
 * are always included. Timestamps are cumulative arc length over speed.
 */
inline std::vector<TimedWaypoint> lawnmower_waypoints(const LawnmowerSpec& s,
                                                      const OpConstraints& c) {
  validate(c);
  check_feasible(s, c);
  const Vec2 u{std::cos(s.chi), std::sin(s.chi)};
  const Vec2 w{-std::sin(s.chi), std::cos(s.chi)};

  std::vector<Vec2> vertices;
  vertices.push_back(s.origin);
  for (int leg = 0; leg < s.n_legs; ++leg) {
    const Vec2 base = s.origin + w * (s.spacing * leg);
    const bool forward = (leg % 2 == 0);
    vertices.push_back(base + u * (forward ? s.leg_length : 0.0));
    if (leg + 1 < s.n_legs)
      vertices.push_back(s.origin + w * (s.spacing * (leg + 1)) + u * (forward ? s.leg_length : 0.0));
  }

  std::vector<TimedWaypoint> out;
  double dist = 0.0;
  out.push_back({{vertices[0].x, vertices[0].y, s.depth}, s.start_time});
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const Vec2 a = vertices[i - 1], b = vertices[i];
    const double len = std::sqrt(norm2(b - a));
    const int k = static_cast<int>(std::floor(len / c.delta - 1e-12));
    for (int j = 1; j <= k; ++j) {
      const double d = j * c.delta;
      if (d >= len - 1e-12) break;
      const Vec2 p = a + (b - a) * (d / len);
      out.push_back({{p.x, p.y, s.depth}, s.start_time + (dist + d) / c.speed});
    }
    dist += len;
    out.push_back({{b.x, b.y, s.depth}, s.start_time + dist / c.speed});
  }
  return out;
}

/// Path position at time t, interpolated along the timestamped polyline.
/// Clamps to the endpoints outside [start, end].
inline Point lawnmower_position(const std::vector<TimedWaypoint>& wps, double t) {
  if (wps.empty()) throw ValidationError("lawnmower_position: empty waypoint list");
  if (t <= wps.front().t) return wps.front().p;
  if (t >= wps.back().t) return wps.back().p;
  std::size_t lo = 0, hi = wps.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (wps[mid].t <= t ? lo : hi) = mid;
  }
  const double span = wps[hi].t - wps[lo].t;
  const double f = (span > 0.0) ? (t - wps[lo].t) / span : 0.0;
  const Point& a = wps[lo].p;
  const Point& b = wps[hi].p;
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), a.z + f * (b.z - a.z)};
}

/// Budget-filling survey centered in the box: legs 70% of the x span, spacing
/// an eighth of that, leg count chosen to consume the time budget.
inline LawnmowerSpec default_centered_lawnmower(const OpConstraints& c, double depth) {
  LawnmowerSpec s;
  s.leg_length = 0.7 * c.box.x_span();
  s.spacing = s.leg_length / 8.0;
  const double reach = c.speed * c.t_budget;
  int n = static_cast<int>(std::floor((reach + s.spacing) / (s.leg_length + s.spacing)));
  const int n_fit = static_cast<int>(std::floor(0.8 * c.box.y_span() / s.spacing)) + 1;
  n = std::max(1, std::min(n, n_fit));
  s.n_legs = n;
  const double cx = 0.5 * (c.box.x_min + c.box.x_max);
  const double cy = 0.5 * (c.box.y_min + c.box.y_max);
  s.origin = {cx - 0.5 * s.leg_length, cy - 0.5 * s.spacing * (n - 1)};
  s.chi = 0.0;
  s.depth = std::clamp(depth, c.depth_min, c.depth_max);
  s.start_time = 0.0;
  return s;
}

inline void to_json(nlohmann::json& j, const LawnmowerSpec& s) {
  j = nlohmann::json{{"origin_x", s.origin.x}, {"origin_y", s.origin.y}, {"chi", s.chi},
                     {"leg_length", s.leg_length}, {"spacing", s.spacing},
                     {"n_legs", s.n_legs},         {"depth", s.depth},
                     {"start_time", s.start_time}};
}
inline void from_json(const nlohmann::json& j, LawnmowerSpec& s) {
  s.origin.x = j.value("origin_x", s.origin.x);
  s.origin.y = j.value("origin_y", s.origin.y);
  s.chi = j.value("chi", s.chi);
  s.leg_length = j.value("leg_length", s.leg_length);
  s.spacing = j.value("spacing", s.spacing);
  s.n_legs = j.value("n_legs", s.n_legs);
  s.depth = j.value("depth", s.depth);
  s.start_time = j.value("start_time", s.start_time);
}

inline void to_json(nlohmann::json& j, const OpConstraints& c) {
  j = nlohmann::json{{"x", {c.box.x_min, c.box.x_max}},
                     {"y", {c.box.y_min, c.box.y_max}},
                     {"z", {c.box.z_min, c.box.z_max}},
                     {"T_budget", c.t_budget},
                     {"speed", c.speed},
                     {"delta", c.delta},
                     {"depth_band", {c.depth_min, c.depth_max}}};
}
inline void from_json(const nlohmann::json& j, OpConstraints& c) {
  auto pair = [&](const char* key, double& lo, double& hi) {
    if (j.contains(key)) {
      lo = j.at(key)[0].get<double>();
      hi = j.at(key)[1].get<double>();
    }
  };
  pair("x", c.box.x_min, c.box.x_max);
  pair("y", c.box.y_min, c.box.y_max);
  pair("z", c.box.z_min, c.box.z_max);
  c.t_budget = j.value("T_budget", c.t_budget);
  c.speed = j.value("speed", c.speed);
  c.delta = j.value("delta", c.delta);
  pair("depth_band", c.depth_min, c.depth_max);
}

}  // namespace expedition::phumes
