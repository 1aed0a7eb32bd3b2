#pragma once

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "expedition/core/error.hpp"
#include "expedition/core/geometry.hpp"
#include "expedition/core/rng.hpp"

namespace expedition::env {

using json = nlohmann::json;

/// Tidal crossflow magnitude model: u(t) = u_mean + u_amp * sin(2*pi*t/period + phase).
struct TideParams {
  double u_mean = 0.02;    // m/s
  double u_amp = 0.08;     // m/s
  double period = 44712.0; // s (M2 tide, 12.42 h)
  double phase = 0.0;      // rad
};

/// Hidden environment parameters defining one true world.
struct VentParams {
  double vent_x = 0.0;     // m, seafloor source position
  double vent_y = 0.0;     // m
  double B0 = 0.1;         // m^4/s^3, source buoyancy flux
  double N = 1e-3;         // 1/s, ambient stratification frequency
  double alpha = 0.1;      // entrainment coefficient
  TideParams tide;
  double kappa_h = 1.0;    // m^2/s, horizontal layer diffusivity
  double t_react = 3600.0; // s, reactive-tracer decay timescale
  double z_src = 10.0;     // m, normalization reference height
  double psi = 0.0;        // rad, crossflow azimuth
};

/// Bulk plume scales derived from VentParams.
struct PlumeScales {
  double z_max = 0.0; // m, terminal rise height
  double z_nb = 0.0;  // m, neutrally-buoyant layer height
  double c_w = 0.0;   // m^(4/3)/s, velocity scale: w(z) = c_w * z^(-1/3)
};

inline PlumeScales derived_scales(const VentParams& p) {
  PlumeScales s;
  s.z_max = 3.76 * std::pow(p.B0, 0.25) * std::pow(p.N, -0.75);
  s.z_nb = 0.8 * s.z_max;
  s.c_w = (5.0 / (6.0 * p.alpha)) * std::cbrt(9.0 * p.alpha * p.B0 / 10.0);
  if (!std::isfinite(s.z_max) || !std::isfinite(s.c_w) || s.z_max <= 0.0 || s.c_w <= 0.0)
    throw ValidationError("derived_scales: non-finite plume scales");
  return s;
}

inline void validate(const TideParams& t) {
  if (!(t.period > 0.0)) throw ValidationError("tide.period: must be > 0");
  if (!(t.u_amp >= 0.0)) throw ValidationError("tide.u_amp: must be >= 0");
}

inline void validate(const VentParams& p) {
  if (!(p.B0 > 0.0)) throw ValidationError("B0: must be > 0");
  if (!(p.N > 0.0)) throw ValidationError("N: must be > 0");
  if (!(p.alpha > 0.0 && p.alpha < 0.3)) throw ValidationError("alpha: must be in (0, 0.3)");
  if (!(p.kappa_h >= 0.0)) throw ValidationError("kappa_h: must be >= 0");
  if (!(p.t_react > 0.0)) throw ValidationError("t_react: must be > 0");
  validate(p.tide);
  const PlumeScales s = derived_scales(p);
  if (!(p.z_src > 0.0 && p.z_src < s.z_max))
    throw ValidationError("z_src: must satisfy 0 < z_src < z_max");
}

/// Closed interval of an uncertain scalar; lo == hi pins the value.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) {}
  static Interval fixed(double v) { return {v, v}; }
  double width() const { return hi - lo; }
};

struct TidePrior {
  Interval u_mean = Interval::fixed(0.02);
  Interval u_amp = Interval::fixed(0.08);
  Interval period = Interval::fixed(44712.0);
  Interval phase{0.0, kTwoPi};
};

/// Independent uniform bounds per VentParams field.
struct ParamPrior {
  Interval vent_x{-300.0, 300.0};
  Interval vent_y{-300.0, 300.0};
  Interval B0{0.05, 0.2};
  Interval N = Interval::fixed(1e-3);
  Interval alpha = Interval::fixed(0.1);
  Interval kappa_h = Interval::fixed(1.0);
  Interval t_react = Interval::fixed(3600.0);
  Interval z_src = Interval::fixed(10.0);
  Interval psi{0.0, kTwoPi};
  TidePrior tide;
};

inline void validate(const ParamPrior& pr) {
  auto chk = [](const Interval& iv, const char* name) {
    if (!(iv.lo <= iv.hi))
      throw ValidationError(std::string(name) + ": low > high");
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw ValidationError(std::string(name) + ": non-finite bound");
  };
  chk(pr.vent_x, "prior.vent_x");
  chk(pr.vent_y, "prior.vent_y");
  chk(pr.B0, "prior.B0");
  chk(pr.N, "prior.N");
  chk(pr.alpha, "prior.alpha");
  chk(pr.kappa_h, "prior.kappa_h");
  chk(pr.t_react, "prior.t_react");
  chk(pr.z_src, "prior.z_src");
  chk(pr.psi, "prior.psi");
  chk(pr.tide.u_mean, "prior.tide.u_mean");
  chk(pr.tide.u_amp, "prior.tide.u_amp");
  chk(pr.tide.period, "prior.tide.period");
  chk(pr.tide.phase, "prior.tide.phase");
  if (!(pr.B0.lo > 0.0)) throw ValidationError("prior.B0: lower bound must be > 0");
  if (!(pr.N.lo > 0.0)) throw ValidationError("prior.N: lower bound must be > 0");
  if (!(pr.alpha.lo > 0.0 && pr.alpha.hi < 0.3))
    throw ValidationError("prior.alpha: bounds must lie in (0, 0.3)");
  if (!(pr.kappa_h.lo >= 0.0)) throw ValidationError("prior.kappa_h: lower bound must be >= 0");
  if (!(pr.t_react.lo > 0.0)) throw ValidationError("prior.t_react: lower bound must be > 0");
  if (!(pr.z_src.lo > 0.0)) throw ValidationError("prior.z_src: lower bound must be > 0");
  if (!(pr.tide.period.lo > 0.0)) throw ValidationError("prior.tide.period: lower bound must be > 0");
  if (!(pr.tide.u_amp.lo >= 0.0)) throw ValidationError("prior.tide.u_amp: lower bound must be >= 0");
}

/// Draw a world from the prior. Fields are drawn in declaration order, one
/// uniform each, so a fixed seed gives an identical VentParams everywhere.
inline VentParams sample_params(const ParamPrior& pr, Rng& rng) {
  validate(pr);
  auto draw = [&rng](const Interval& iv) { return iv.lo + rng.uniform() * (iv.hi - iv.lo); };
  VentParams p;
  p.vent_x = draw(pr.vent_x);
  p.vent_y = draw(pr.vent_y);
  p.B0 = draw(pr.B0);
  p.N = draw(pr.N);
  p.alpha = draw(pr.alpha);
  p.kappa_h = draw(pr.kappa_h);
  p.t_react = draw(pr.t_react);
  p.z_src = draw(pr.z_src);
  p.psi = draw(pr.psi);
  p.tide.u_mean = draw(pr.tide.u_mean);
  p.tide.u_amp = draw(pr.tide.u_amp);
  p.tide.period = draw(pr.tide.period);
  p.tide.phase = draw(pr.tide.phase);
  validate(p);
  return p;
}

inline void to_json(json& j, const TideParams& t) {
  j = json{{"u_mean", t.u_mean}, {"u_amp", t.u_amp}, {"period", t.period}, {"phase", t.phase}};
}
inline void from_json(const json& j, TideParams& t) {
  t.u_mean = j.value("u_mean", t.u_mean);
  t.u_amp = j.value("u_amp", t.u_amp);
  t.period = j.value("period", t.period);
  t.phase = j.value("phase", t.phase);
}

inline void to_json(json& j, const VentParams& p) {
  j = json{{"vent_x", p.vent_x}, {"vent_y", p.vent_y}, {"B0", p.B0},   {"N", p.N},
           {"alpha", p.alpha},   {"tide", p.tide},     {"kappa_h", p.kappa_h},
           {"t_react", p.t_react}, {"z_src", p.z_src}, {"psi", p.psi}};
}
inline void from_json(const json& j, VentParams& p) {
  p.vent_x = j.value("vent_x", p.vent_x);
  p.vent_y = j.value("vent_y", p.vent_y);
  p.B0 = j.value("B0", p.B0);
  p.N = j.value("N", p.N);
  p.alpha = j.value("alpha", p.alpha);
  if (j.contains("tide")) p.tide = j.at("tide").get<TideParams>();
  p.kappa_h = j.value("kappa_h", p.kappa_h);
  p.t_react = j.value("t_react", p.t_react);
  p.z_src = j.value("z_src", p.z_src);
  p.psi = j.value("psi", p.psi);
}

inline void to_json(json& j, const Interval& iv) { j = json::array({iv.lo, iv.hi}); }
inline void from_json(const json& j, Interval& iv) {
  if (j.is_array() && j.size() == 2) {
    iv.lo = j[0].get<double>();
    iv.hi = j[1].get<double>();
  } else if (j.is_number()) {
    iv = Interval::fixed(j.get<double>());
  } else {
    throw ValidationError("prior interval: expected [lo, hi] or a single number");
  }
}

inline void to_json(json& j, const TidePrior& t) {
  j = json{{"u_mean", t.u_mean}, {"u_amp", t.u_amp}, {"period", t.period}, {"phase", t.phase}};
}
inline void from_json(const json& j, TidePrior& t) {
  if (j.contains("u_mean")) t.u_mean = j.at("u_mean").get<Interval>();
  if (j.contains("u_amp")) t.u_amp = j.at("u_amp").get<Interval>();
  if (j.contains("period")) t.period = j.at("period").get<Interval>();
  if (j.contains("phase")) t.phase = j.at("phase").get<Interval>();
}

inline void to_json(json& j, const ParamPrior& p) {
  j = json{{"vent_x", p.vent_x}, {"vent_y", p.vent_y}, {"B0", p.B0},   {"N", p.N},
           {"alpha", p.alpha},   {"kappa_h", p.kappa_h}, {"t_react", p.t_react},
           {"z_src", p.z_src},   {"psi", p.psi},       {"tide", p.tide}};
}
inline void from_json(const json& j, ParamPrior& p) {
  if (j.contains("vent_x")) p.vent_x = j.at("vent_x").get<Interval>();
  if (j.contains("vent_y")) p.vent_y = j.at("vent_y").get<Interval>();
  if (j.contains("B0")) p.B0 = j.at("B0").get<Interval>();
  if (j.contains("N")) p.N = j.at("N").get<Interval>();
  if (j.contains("alpha")) p.alpha = j.at("alpha").get<Interval>();
  if (j.contains("kappa_h")) p.kappa_h = j.at("kappa_h").get<Interval>();
  if (j.contains("t_react")) p.t_react = j.at("t_react").get<Interval>();
  if (j.contains("z_src")) p.z_src = j.at("z_src").get<Interval>();
  if (j.contains("psi")) p.psi = j.at("psi").get<Interval>();
  if (j.contains("tide")) p.tide = j.at("tide").get<TidePrior>();
}

}  // namespace expedition::env
