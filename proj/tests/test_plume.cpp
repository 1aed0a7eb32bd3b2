#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "expedition/core/rng.hpp"
#include "expedition/env/kinematics.hpp"
#include "expedition/env/observe.hpp"
#include "expedition/env/params.hpp"
#include "expedition/env/plume.hpp"

using namespace expedition;
using namespace expedition::env;

namespace {

VentParams default_theta() { return VentParams{}; }

VentParams random_theta(Rng& rng) {
  ParamPrior pr;
  pr.B0 = {0.02, 0.4};
  pr.alpha = {0.05, 0.15};
  pr.kappa_h = {0.1, 5.0};
  pr.t_react = {600.0, 7200.0};
  pr.tide.u_mean = {0.0, 0.05};
  pr.tide.u_amp = {0.0, 0.1};
  return sample_params(pr, rng);
}

// Composite-Simpson quadrature of f on [a, b].
template <typename F>
double simpson(F f, double a, double b, int n) {
  double s = f(a) + f(b);
  const double h = (b - a) / n;
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("derived_scales closed forms", "[plume]") {
  VentParams p = default_theta();
  const PlumeScales s = derived_scales(p);
  CHECK(s.z_max == Catch::Approx(376.0).margin(1e-9));
  CHECK(s.z_nb == Catch::Approx(300.8).margin(1e-9));

  // independent arithmetic for the velocity scale
  const double c_w_oracle = (5.0 / 0.6) * std::exp(std::log(0.009) / 3.0);
  CHECK(s.c_w == Catch::Approx(c_w_oracle).epsilon(1e-12));
  CHECK(s.c_w == Catch::Approx(1.7334).margin(5e-4));

  VentParams p16 = p;
  p16.B0 *= 16.0;
  CHECK(derived_scales(p16).z_max == Catch::Approx(2.0 * s.z_max).epsilon(1e-12));

  VentParams bad = p;
  bad.N = 0.0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
}

TEST_CASE("stem_radius linear spreading", "[plume]") {
  VentParams p = default_theta();
  CHECK(stem_radius(p, 0.0) == 0.0);
  CHECK(stem_radius(p, 100.0) == Catch::Approx(12.0).epsilon(1e-14));
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const double z = rng.uniform(1.0, 350.0);
    CHECK(stem_radius(p, 2.0 * z) == Catch::Approx(2.0 * stem_radius(p, z)).epsilon(1e-12));
  }
}

TEST_CASE("rise_time matches quadrature of 1/w", "[plume]") {
  VentParams p = default_theta();
  const PlumeScales s = derived_scales(p);
  CHECK(rise_time(p, 0.0) == 0.0);

  auto integrand = [&](double z) { return std::pow(z, 1.0 / 3.0) / s.c_w; };
  const double oracle = simpson(integrand, 0.0, 100.0, 20000);
  CHECK(rise_time(p, 100.0) == Catch::Approx(oracle).epsilon(1e-6));
  CHECK(rise_time(p, 100.0) == Catch::Approx(200.8).margin(0.1));

  double prev = 0.0;
  for (double z = 10.0; z <= s.z_max; z += 20.0) {
    const double t = rise_time(p, z);
    CHECK(t > prev);
    prev = t;
  }
  CHECK_THROWS_AS(rise_time(p, s.z_max + 1.0), RangeError);
}

TEST_CASE("crossflow magnitude and period mean", "[plume]") {
  TideParams t;
  t.u_mean = 0.0;
  t.u_amp = 0.1;
  t.period = 3600.0;
  t.phase = 0.0;
  CHECK(tidal_speed(t, 900.0) == Catch::Approx(0.1).epsilon(1e-12));

  TideParams steady = t;
  steady.u_amp = 0.0;
  steady.u_mean = 0.03;
  for (double tt : {0.0, 100.0, 5000.0})
    CHECK(tidal_speed(steady, tt) == Catch::Approx(0.03).epsilon(1e-14));

  // numeric average over one full period
  TideParams m;
  m.u_mean = 0.02;
  m.u_amp = 0.08;
  m.period = 44712.0;
  m.phase = 1.3;
  auto f = [&](double tt) { return tidal_speed(m, tt); };
  const double mean = simpson(f, 0.0, m.period, 100000) / m.period;
  CHECK(mean == Catch::Approx(0.02).margin(1e-9));
}

TEST_CASE("tidal_displacement equals quadrature of crossflow", "[plume]") {
  VentParams p = default_theta();
  p.psi = 0.7;
  p.tide.phase = 0.4;
  auto fx = [&](double tt) { return crossflow(p, tt).x; };
  auto fy = [&](double tt) { return crossflow(p, tt).y; };
  const Vec2 d = tidal_displacement(p, 500.0, 9000.0);
  CHECK(d.x == Catch::Approx(simpson(fx, 500.0, 9000.0, 40000)).margin(1e-6));
  CHECK(d.y == Catch::Approx(simpson(fy, 500.0, 9000.0, 40000)).margin(1e-6));
}

TEST_CASE("concentration normalization and cutoff", "[plume]") {
  VentParams p = default_theta();
  p.tide.u_mean = 0.0;
  p.tide.u_amp = 0.0;
  const TracerPair c = concentration(p, {0.0, 0.0, p.z_src}, 0.0);
  CHECK(c.conserved == Catch::Approx(1.0).margin(1e-12));
  CHECK(c.reactive == Catch::Approx(1.0).margin(1e-12));

  // above the terminal rise height at t=0 there is nothing at all
  const TracerPair top = concentration(p, {0.0, 0.0, 380.0}, 0.0);
  CHECK(top.conserved == 0.0);

  // below z_src the stem column is clamped, not singular
  const TracerPair low = concentration(p, {0.0, 0.0, 1.0}, 0.0);
  CHECK(low.conserved == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("stem flux is conserved along the column", "[plume]") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const VentParams p = random_theta(rng);
    const PlumeScales s = derived_scales(p);
    const PlumeField field(p, 0.0);  // no puffs at t=0
    double ref = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double z = p.z_src + (s.z_max - p.z_src) * (i + 0.5) / 20.0;
      const Vec2 cen = field.stem_center_at(z, 0.0);
      const double c = field({cen.x, cen.y, z}).conserved;
      const double b = stem_radius(p, z);
      const double w = s.c_w * std::pow(z, -1.0 / 3.0);
      const double flux = kPi * b * b * w * c;
      if (i == 0)
        ref = flux;
      else
        CHECK(flux == Catch::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("reactive never exceeds conserved", "[plume]") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const VentParams p = random_theta(rng);
    const Point q{rng.uniform(-800.0, 800.0), rng.uniform(-800.0, 800.0), rng.uniform(0.0, 400.0)};
    const double t = rng.uniform(0.0, 6.0 * 3600.0);
    const TracerPair c = concentration(p, q, t);
    CHECK(c.reactive <= c.conserved * (1.0 + 1e-12) + 1e-300);
    CHECK(c.reactive >= 0.0);
    CHECK(std::isfinite(c.conserved));
  }
}

TEST_CASE("axial symmetry without tide", "[plume]") {
  VentParams p = default_theta();
  p.tide.u_mean = 0.0;
  p.tide.u_amp = 0.0;
  p.vent_x = 55.0;
  p.vent_y = -20.0;
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const double r = rng.uniform(0.0, 300.0);
    const double z = rng.uniform(0.0, 399.0);
    const double t = rng.uniform(0.0, 20000.0);
    const double a1 = rng.uniform(0.0, kTwoPi), a2 = rng.uniform(0.0, kTwoPi);
    const TracerPair c1 =
        concentration(p, {p.vent_x + r * std::cos(a1), p.vent_y + r * std::sin(a1), z}, t);
    const TracerPair c2 =
        concentration(p, {p.vent_x + r * std::cos(a2), p.vent_y + r * std::sin(a2), z}, t);
    CHECK(c1.conserved == Catch::Approx(c2.conserved).margin(1e-12));
    CHECK(c1.reactive == Catch::Approx(c2.reactive).margin(1e-12));
  }
}

TEST_CASE("concentration is continuous, including across puff releases", "[plume]") {
  Rng rng(19);
  const VentParams p = default_theta();
  for (int i = 0; i < 50; ++i) {
    const Point q{rng.uniform(-400.0, 400.0), rng.uniform(-400.0, 400.0),
                  rng.uniform(0.0, 370.0)};
    const double t = rng.uniform(0.0, 4.0 * 3600.0);
    const TracerPair c0 = concentration(p, q, t);
    const TracerPair cx = concentration(p, {q.x + 1e-4, q.y, q.z}, t);
    const TracerPair ct = concentration(p, q, t + 1e-3);
    CHECK(std::abs(cx.conserved - c0.conserved) < 1e-3);
    CHECK(std::abs(ct.conserved - c0.conserved) < 1e-3);
  }
  // straddle a release instant: the newborn puff carries zero mass
  const double t_rel = 3.0 * kPuffInterval;
  const Point q{10.0, 0.0, 300.0};
  const TracerPair before = concentration(p, q, t_rel - 1e-6);
  const TracerPair after = concentration(p, q, t_rel + 1e-6);
  CHECK(after.conserved == Catch::Approx(before.conserved).margin(1e-6));
}

TEST_CASE("observe noise contract", "[plume]") {
  const VentParams p = default_theta();
  const Pose pose{30.0, 10.0, 300.0, 0.0};

  Rng r0(5);
  const Observation clean = observe(p, pose, 1000.0, 0.0, r0);
  const TracerPair truth = concentration(p, {pose.x, pose.y, pose.z}, 1000.0);
  CHECK(clean.reactive == truth.reactive);
  CHECK(clean.turbidity == truth.conserved);

  Rng ra(99), rb(99);
  const Observation oa = observe(p, pose, 1000.0, 0.01, ra);
  const Observation ob = observe(p, pose, 1000.0, 0.01, rb);
  CHECK(oa.reactive == ob.reactive);
  CHECK(oa.turbidity == ob.turbidity);

  Rng rs(123);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Observation o = observe(p, pose, 1000.0, 0.01, rs);
    const double e = o.reactive - truth.reactive;
    sum += e;
    sum2 += e * e;
  }
  const double std_hat = std::sqrt(sum2 / n - (sum / n) * (sum / n));
  CHECK(std_hat == Catch::Approx(0.01).epsilon(0.02));
}

TEST_CASE("step kinematics", "[plume]") {
  Box box;
  const double omega_max = kPi / 60.0;

  const Pose p0{0.0, 0.0, 200.0, 0.0};
  const MotionPrimitive straight{0.0, 0.0, 30.0};
  const StepResult r1 = step(p0, straight, box, 1.0, omega_max);
  CHECK(r1.pose.x == Catch::Approx(30.0).margin(1e-12));
  CHECK(r1.pose.y == Catch::Approx(0.0).margin(1e-12));
  CHECK_FALSE(r1.clipped);

  // requested half-turn clamps to omega_max * duration = pi/4
  const MotionPrimitive uturn{kPi, 0.0, 15.0};
  const StepResult r2 = step(p0, uturn, box, 1.0, kPi / 60.0);
  CHECK(r2.pose.heading == Catch::Approx(kPi / 4.0).epsilon(1e-12));

  // wall 10 m ahead: stop on the wall with the clip flag set
  const Pose near_wall{box.x_max - 10.0, 0.0, 200.0, 0.0};
  const StepResult r3 = step(near_wall, straight, box, 1.0, omega_max);
  CHECK(r3.pose.x == box.x_max);
  CHECK(r3.clipped);

  // zero-heading steps compose additively
  const StepResult s1 = step(p0, straight, box, 1.0, omega_max);
  const StepResult s2 = step(s1.pose, straight, box, 1.0, omega_max);
  CHECK(s2.pose.x == Catch::Approx(60.0).margin(1e-12));
}

TEST_CASE("sample_params prior draws", "[plume]") {
  ParamPrior fixed;
  fixed.vent_x = Interval::fixed(12.0);
  fixed.vent_y = Interval::fixed(-7.0);
  fixed.B0 = Interval::fixed(0.1);
  fixed.psi = Interval::fixed(0.25);
  fixed.tide.phase = Interval::fixed(1.0);
  Rng rng(1);
  const VentParams p = sample_params(fixed, rng);
  CHECK(p.vent_x == 12.0);
  CHECK(p.vent_y == -7.0);
  CHECK(p.B0 == 0.1);
  CHECK(p.psi == 0.25);
  CHECK(p.tide.phase == 1.0);

  ParamPrior pr;
  pr.B0 = {0.01, 0.5};
  Rng rng2(77);
  double mean = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) mean += sample_params(pr, rng2).B0;
  mean /= n;
  CHECK(mean == Catch::Approx(0.255).epsilon(0.02));

  ParamPrior bad;
  bad.vent_x = {10.0, -10.0};
  Rng rng3(5);
  CHECK_THROWS_AS(sample_params(bad, rng3), ValidationError);

  Rng ra(42), rb(42);
  const VentParams pa = sample_params(pr, ra);
  const VentParams pb = sample_params(pr, rb);
  CHECK(pa.B0 == pb.B0);
  CHECK(pa.vent_x == pb.vent_x);
  CHECK(pa.tide.phase == pb.tide.phase);
}
