#pragma once

#include <cmath>
#include <vector>

#include "expedition/core/error.hpp"
#include "expedition/core/geometry.hpp"
#include "expedition/env/params.hpp"

namespace expedition::env {

/* Buoyant plume forward model.
 *
 * The field has two parts sharing a single normalized tracer scale
 * (stem centerline value at z_src equals 1):
 *
 *   stem  — entrainment-plume column above the vent: radius b(z) = (6a/5) z,
 *           updraft w(z) = c_w z^(-1/3), centerline dilution
 *           C(z) = (z_src/z)^(5/3), Gaussian cross-section exp(-r^2/b^2).
 *           The centerline is bent by the crossflow sampled at the parcel's
 *           release time times its rise time.
 *
 *   layer — neutrally-buoyant intrusion at z_nb, modeled as 3-D Gaussian
 *           puffs shed from the stem top every tau seconds, advected by the
 *           time-integral of the crossflow and spreading as
 *           sigma_h^2(age) = b(z_nb)^2 + 2 kappa_h age. A puff accumulates
 *           mass F*min(tau, age) so the field stays continuous in t across
 *           release instants; mature puffs carry mass F*tau.
 *
 * Conserved channel = stem + layer. Reactive channel = stem + decayed layer
 * (each puff weighted by exp(-age/t_react)); reactive <= conserved always.
 */

inline constexpr double kPuffInterval = 600.0;  // s between layer puff releases

/// Stem radius b(z) = (6*alpha/5) * z.
inline double stem_radius(const VentParams& p, double z) {
  if (z < 0.0) throw RangeError("stem_radius: z must be >= 0");
  return (6.0 * p.alpha / 5.0) * z;
}

namespace detail {
inline double rise_time_scaled(double z, double c_w) {
  return 0.75 * std::pow(z, 4.0 / 3.0) / c_w;
}
}  // namespace detail

/// Parcel travel time from the vent to height z: integral of 1/w(z') on [0, z].
inline double rise_time(const VentParams& p, double z) {
  const PlumeScales s = derived_scales(p);
  if (z < 0.0 || z > s.z_max) throw RangeError("rise_time: z outside [0, z_max]");
  return detail::rise_time_scaled(z, s.c_w);
}

/// Signed tidal speed along the crossflow azimuth.
inline double tidal_speed(const TideParams& t, double time) {
  return t.u_mean + t.u_amp * std::sin(kTwoPi * time / t.period + t.phase);
}

/// Horizontal crossflow vector at time t (negative speed reverses direction).
inline Vec2 crossflow(const VentParams& p, double t) {
  const double u = tidal_speed(p.tide, t);
  return {u * std::cos(p.psi), u * std::sin(p.psi)};
}

/// Integral of the crossflow vector over [t0, t1], analytic.
inline Vec2 tidal_displacement(const VentParams& p, double t0, double t1) {
  const TideParams& td = p.tide;
  const double w = kTwoPi / td.period;
  const double du = td.u_mean * (t1 - t0) -
                    (td.u_amp / w) * (std::cos(w * t1 + td.phase) - std::cos(w * t0 + td.phase));
  return {du * std::cos(p.psi), du * std::sin(p.psi)};
}

/// Normalized tracer pair at a point; reactive <= conserved.
struct TracerPair {
  double reactive = 0.0;
  double conserved = 0.0;
};

/// Snapshot evaluator for one (theta, t). Precomputes scales and the puff set
/// so batch evaluation over grids stays cheap. Pure and thread-safe once built.
class PlumeField {
public:
  struct Puff {
    double cx = 0.0, cy = 0.0;   // advected center
    double inv_two_sh2 = 0.0;    // 1 / (2 sigma_h^2)
    double amp = 0.0;            // mass / ((2 pi)^(3/2) sigma_h^2 sigma_z)
    double decay = 1.0;          // exp(-age / t_react)
    double sigma_h = 0.0;
  };

  PlumeField(const VentParams& theta, double t) : theta_(theta), t_(t) {
    scales_ = derived_scales(theta);
    sigma_z_ = 0.1 * scales_.z_max;
    inv_two_sz2_ = 1.0 / (2.0 * sigma_z_ * sigma_z_);
    // Conserved tracer flux through any stem section: pi b(z)^2 w(z) C(z),
    // constant in z by construction; evaluate at z_src where C = 1.
    const double b_src = stem_radius(theta, theta.z_src);
    const double w_src = scales_.c_w * std::pow(theta.z_src, -1.0 / 3.0);
    flux_ = kPi * b_src * b_src * w_src;
    b_nb_ = stem_radius(theta, scales_.z_nb);
    rise_nb_ = detail::rise_time_scaled(scales_.z_nb, scales_.c_w);

    const int n_puffs = (t >= 0.0) ? static_cast<int>(std::floor(t / kPuffInterval)) + 1 : 0;
    puffs_.reserve(static_cast<std::size_t>(n_puffs));
    const double two_pi_32 = std::pow(kTwoPi, 1.5);
    for (int k = 0; k < n_puffs; ++k) {
      const double t_rel = k * kPuffInterval;
      const double age = t - t_rel;
      Puff pf;
      const Vec2 top = stem_center_at(scales_.z_nb, t_rel);
      const Vec2 adv = tidal_displacement(theta, t_rel, t);
      pf.cx = top.x + adv.x;
      pf.cy = top.y + adv.y;
      const double sh2 = b_nb_ * b_nb_ + 2.0 * theta.kappa_h * age;
      pf.sigma_h = std::sqrt(sh2);
      pf.inv_two_sh2 = 1.0 / (2.0 * sh2);
      const double mass = flux_ * std::min(kPuffInterval, age);
      pf.amp = mass / (two_pi_32 * sh2 * sigma_z_);
      pf.decay = std::exp(-age / theta.t_react);
      puffs_.push_back(pf);
    }
  }

  /// Bent stem centerline position at height z for a parcel observed at time
  /// t_obs (frozen-crossflow: velocity at release time times rise time).
  Vec2 stem_center_at(double z, double t_obs) const {
    const double tr = detail::rise_time_scaled(z, scales_.c_w);
    const Vec2 u = crossflow(theta_, t_obs - tr);
    return {theta_.vent_x + u.x * tr, theta_.vent_y + u.y * tr};
  }

  /// Stem contribution at a point (zero above z_max; clamped below z_src).
  double stem(const Point& p) const {
    if (p.z > scales_.z_max) return 0.0;
    const double ze = std::max(p.z, theta_.z_src);
    const Vec2 c = stem_center_at(ze, t_);
    const double dx = p.x - c.x, dy = p.y - c.y;
    const double b = stem_radius(theta_, ze);
    const double mag = std::pow(theta_.z_src / ze, 5.0 / 3.0);
    return mag * std::exp(-(dx * dx + dy * dy) / (b * b));
  }

  TracerPair operator()(const Point& p) const {
    const double st = stem(p);
    double layer = 0.0, layer_reactive = 0.0;
    const double dz2 = (p.z - scales_.z_nb) * (p.z - scales_.z_nb) * inv_two_sz2_;
    for (const Puff& pf : puffs_) {
      const double dx = p.x - pf.cx, dy = p.y - pf.cy;
      const double g = pf.amp * std::exp(-(dx * dx + dy * dy) * pf.inv_two_sh2 - dz2);
      layer += g;
      layer_reactive += g * pf.decay;
    }
    return {st + layer_reactive, st + layer};
  }

  const PlumeScales& scales() const { return scales_; }
  const VentParams& theta() const { return theta_; }
  double time() const { return t_; }
  double sigma_z() const { return sigma_z_; }
  double inv_two_sigma_z2() const { return inv_two_sz2_; }
  double flux() const { return flux_; }
  const std::vector<Puff>& puffs() const { return puffs_; }

private:
  VentParams theta_;
  double t_;
  PlumeScales scales_;
  double sigma_z_ = 0.0, inv_two_sz2_ = 0.0, flux_ = 0.0, b_nb_ = 0.0, rise_nb_ = 0.0;
  std::vector<Puff> puffs_;
};

/// Noiseless tracer pair at (p, t).
inline TracerPair concentration(const VentParams& theta, const Point& p, double t) {
  return PlumeField(theta, t)(p);
}

}  // namespace expedition::env
