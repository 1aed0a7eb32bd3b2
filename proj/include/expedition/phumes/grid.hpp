#pragma once

#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "expedition/belief/particles.hpp"
#include "expedition/core/error.hpp"
#include "expedition/core/geometry.hpp"
#include "expedition/env/plume.hpp"

namespace expedition::phumes {

/// Discretized space-time grid. Values are evaluated at spatial cell centers
/// and at slice times t0 + it*dt.
struct GridSpec {
  double x0 = -1000.0, y0 = -1000.0, z0 = 0.0;
  int nx = 64, ny = 64, nz = 16, nt = 8;
  double dx = 31.25, dy = 31.25, dz = 25.0;
  double dt = 1800.0;
  double t0 = 0.0;

  std::size_t cells() const {
    return static_cast<std::size_t>(nx) * ny * nz * nt;
  }
  std::size_t index(int ix, int iy, int iz, int it) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(iy) +
                static_cast<std::size_t>(ny) *
                    (static_cast<std::size_t>(iz) + static_cast<std::size_t>(nz) * it));
  }
  Point center(int ix, int iy, int iz) const {
    return {x0 + (ix + 0.5) * dx, y0 + (iy + 0.5) * dy, z0 + (iz + 0.5) * dz};
  }
  double slice_time(int it) const { return t0 + it * dt; }
};

inline void validate(const GridSpec& g) {
  if (g.nx < 1 || g.ny < 1 || g.nz < 1 || g.nt < 1)
    throw ValidationError("grid: all counts must be >= 1");
  if (!(g.dx > 0.0 && g.dy > 0.0 && g.dz > 0.0 && g.dt > 0.0))
    throw ValidationError("grid: all spacings must be > 0");
}

/// 64 x 64 x 16 grid over the box with one slice per half hour of mission.
inline GridSpec default_grid(const Box& box, double t_budget) {
  GridSpec g;
  g.x0 = box.x_min;
  g.y0 = box.y_min;
  g.z0 = box.z_min;
  g.dx = box.x_span() / g.nx;
  g.dy = box.y_span() / g.ny;
  g.dz = box.z_span() / g.nz;
  g.dt = 1800.0;
  g.nt = std::max(1, static_cast<int>(std::llround(t_budget / g.dt)));
  g.t0 = 0.0;
  return g;
}

/// In-plume probability per cell, x-fastest then y, z, t.
struct ForecastGrid {
  GridSpec spec;
  std::vector<double> p;

  double at(int ix, int iy, int iz, int it) const { return p[spec.index(ix, iy, iz, it)]; }

  /// Probability of the cell containing (point, time); 0 outside the grid.
  double lookup(const Point& q, double t) const {
    const int ix = static_cast<int>(std::floor((q.x - spec.x0) / spec.dx));
    const int iy = static_cast<int>(std::floor((q.y - spec.y0) / spec.dy));
    const int iz = static_cast<int>(std::floor((q.z - spec.z0) / spec.dz));
    const int it = static_cast<int>(std::floor((t - spec.t0) / spec.dt));
    if (ix < 0 || ix >= spec.nx || iy < 0 || iy >= spec.ny || iz < 0 || iz >= spec.nz ||
        it < 0 || it >= spec.nt)
      return 0.0;
    return at(ix, iy, iz, it);
  }
};

namespace detail {

/* Accumulate one particle's conserved field over one time slice into scratch
 * (nx*ny*nz, x-fastest). Stem and puff cross-sections are axis-separable
 * Gaussians, so each term costs O(nx+ny) exps plus an outer-product sweep.
 */
inline void rasterize_conserved_slice(const env::PlumeField& field, const GridSpec& g,
                                      std::vector<double>& scratch, std::vector<double>& ex,
                                      std::vector<double>& ey) {
  scratch.assign(static_cast<std::size_t>(g.nx) * g.ny * g.nz, 0.0);
  ex.resize(g.nx);
  ey.resize(g.ny);
  const auto& theta = field.theta();
  const auto& scales = field.scales();

  // stem: per z-level Gaussian about the bent centerline
  for (int iz = 0; iz < g.nz; ++iz) {
    const double z = g.z0 + (iz + 0.5) * g.dz;
    if (z > scales.z_max) continue;
    const double ze = std::max(z, theta.z_src);
    const Vec2 c = field.stem_center_at(ze, field.time());
    const double b = env::stem_radius(theta, ze);
    const double inv_b2 = 1.0 / (b * b);
    const double mag = std::pow(theta.z_src / ze, 5.0 / 3.0);
    for (int ix = 0; ix < g.nx; ++ix) {
      const double dx = g.x0 + (ix + 0.5) * g.dx - c.x;
      ex[ix] = std::exp(-dx * dx * inv_b2);
    }
    for (int iy = 0; iy < g.ny; ++iy) {
      const double dy = g.y0 + (iy + 0.5) * g.dy - c.y;
      ey[iy] = std::exp(-dy * dy * inv_b2);
    }
    double* slab = scratch.data() + static_cast<std::size_t>(iz) * g.ny * g.nx;
    for (int iy = 0; iy < g.ny; ++iy) {
      const double row = mag * ey[iy];
      double* line = slab + static_cast<std::size_t>(iy) * g.nx;
      for (int ix = 0; ix < g.nx; ++ix) line[ix] += row * ex[ix];
    }
  }

  // layer puffs
  for (const auto& pf : field.puffs()) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double dx = g.x0 + (ix + 0.5) * g.dx - pf.cx;
      ex[ix] = std::exp(-dx * dx * pf.inv_two_sh2);
    }
    for (int iy = 0; iy < g.ny; ++iy) {
      const double dy = g.y0 + (iy + 0.5) * g.dy - pf.cy;
      ey[iy] = std::exp(-dy * dy * pf.inv_two_sh2);
    }
    for (int iz = 0; iz < g.nz; ++iz) {
      const double z = g.z0 + (iz + 0.5) * g.dz;
      const double dz = z - scales.z_nb;
      const double zf = pf.amp * std::exp(-dz * dz * field.inv_two_sigma_z2());
      double* slab = scratch.data() + static_cast<std::size_t>(iz) * g.ny * g.nx;
      for (int iy = 0; iy < g.ny; ++iy) {
        const double row = zf * ey[iy];
        double* line = slab + static_cast<std::size_t>(iy) * g.nx;
        for (int ix = 0; ix < g.nx; ++ix) line[ix] += row * ex[ix];
      }
    }
  }
}

inline void forecast_particle_range(const belief::ParamParticleBelief& pb, std::size_t k0,
                                    std::size_t k1, const GridSpec& g, double c_thresh,
                                    std::vector<double>& partial) {
  partial.assign(g.cells(), 0.0);
  std::vector<double> scratch, ex, ey;
  const std::size_t slice_cells = static_cast<std::size_t>(g.nx) * g.ny * g.nz;
  for (std::size_t k = k0; k < k1; ++k) {
    const double w = pb.weights[k];
    for (int it = 0; it < g.nt; ++it) {
      const env::PlumeField field(pb.particles[k], g.slice_time(it));
      rasterize_conserved_slice(field, g, scratch, ex, ey);
      double* out = partial.data() + slice_cells * it;
      for (std::size_t c = 0; c < slice_cells; ++c)
        if (scratch[c] >= c_thresh) out[c] += w;
    }
  }
}

}  // namespace detail

/// Parallelism knob shared by forecast and bench: EXPEDITION_THREADS, with 0
/// (the default) meaning fully serial deterministic execution.
inline int threads_from_env() {
  if (const char* s = std::getenv("EXPEDITION_THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) return v;
  }
  return 0;
}

/* Probabilistic envelope forecast: per cell, the weighted fraction of
 * particles whose conserved concentration at the cell center and slice time
 * reaches c_thresh. Deterministic given the belief; with n_threads > 0,
 * particle ranges are evaluated in parallel and reduced in range order.
 */
inline ForecastGrid forecast(const belief::ParamParticleBelief& pb, const GridSpec& spec,
                             double c_thresh, int n_threads = threads_from_env()) {
  validate(spec);
  pb.check();
  if (!(c_thresh > 0.0)) throw ValidationError("forecast: c_thresh must be > 0");

  ForecastGrid grid;
  grid.spec = spec;
  const std::size_t k = pb.size();
  if (n_threads <= 1) {
    detail::forecast_particle_range(pb, 0, k, spec, c_thresh, grid.p);
    return grid;
  }
  const std::size_t nt = std::min<std::size_t>(n_threads, k);
  std::vector<std::vector<double>> partials(nt);
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < nt; ++w) {
    const std::size_t k0 = k * w / nt, k1 = k * (w + 1) / nt;
    workers.emplace_back([&, w, k0, k1] {
      detail::forecast_particle_range(pb, k0, k1, spec, c_thresh, partials[w]);
    });
  }
  for (auto& t : workers) t.join();
  grid.p = std::move(partials[0]);
  for (std::size_t w = 1; w < nt; ++w)
    for (std::size_t c = 0; c < grid.p.size(); ++c) grid.p[c] += partials[w][c];
  return grid;
}

inline void to_json(nlohmann::json& j, const GridSpec& g) {
  j = nlohmann::json{{"x0", g.x0}, {"y0", g.y0}, {"z0", g.z0}, {"nx", g.nx},
                     {"ny", g.ny}, {"nz", g.nz}, {"nt", g.nt}, {"dx", g.dx},
                     {"dy", g.dy}, {"dz", g.dz}, {"dt", g.dt}, {"t0", g.t0}};
}
inline void from_json(const nlohmann::json& j, GridSpec& g) {
  g.x0 = j.value("x0", g.x0);
  g.y0 = j.value("y0", g.y0);
  g.z0 = j.value("z0", g.z0);
  g.nx = j.value("nx", g.nx);
  g.ny = j.value("ny", g.ny);
  g.nz = j.value("nz", g.nz);
  g.nt = j.value("nt", g.nt);
  g.dx = j.value("dx", g.dx);
  g.dy = j.value("dy", g.dy);
  g.dz = j.value("dz", g.dz);
  g.dt = j.value("dt", g.dt);
  g.t0 = j.value("t0", g.t0);
}

}  // namespace expedition::phumes
