#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "expedition/core/error.hpp"
#include "expedition/core/normal.hpp"
#include "expedition/core/rng.hpp"
#include "expedition/belief/gp.hpp"

namespace expedition::belief {

namespace detail {

/// log of the product CDF Pr(max_i f_i < z) under independent marginals.
inline double log_product_cdf(double z, std::span<const MeanVar> mv) {
  double acc = 0.0;
  for (const auto& m : mv) {
    const double s = std::max(std::sqrt(m.var), 1e-12);
    acc += log_norm_cdf((z - m.mean) / s);
  }
  return acc;
}

/// z with product-CDF(z) = q, by bisection (the CDF is strictly increasing).
inline double product_cdf_quantile(double q, std::span<const MeanVar> mv) {
  double lo = mv[0].mean, hi = mv[0].mean;
  for (const auto& m : mv) {
    const double s = std::max(std::sqrt(m.var), 1e-12);
    lo = std::min(lo, m.mean - 12.0 * s);
    hi = std::max(hi, m.mean + 12.0 * s);
  }
  const double logq = std::log(q);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (log_product_cdf(mid, mv) < logq ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/* Sample plausible values of the field maximum over a candidate grid.
 * Pr(Z* < z) ~ prod_i Phi((z - mu_i)/sigma_i) is summarized by a Gumbel
 * distribution matched at its 0.25/0.5/0.75 quantiles, then M Gumbel draws
 * z* = a - beta ln(-ln r) are returned. Draws are not floored; samples may
 * fall anywhere.
 */
inline std::vector<double> sample_max_values(const GPBelief& b,
                                             std::span<const SpacetimePoint> grid,
                                             std::size_t m_samples, Rng& rng) {
  if (grid.empty()) throw ValidationError("sample_max_values: empty candidate grid");
  if (m_samples == 0) throw ValidationError("sample_max_values: M must be >= 1");
  const std::vector<MeanVar> mv = b.predict(grid);

  const double y25 = detail::product_cdf_quantile(0.25, mv);
  const double y50 = detail::product_cdf_quantile(0.50, mv);
  const double y75 = detail::product_cdf_quantile(0.75, mv);
  auto g = [](double q) { return -std::log(-std::log(q)); };
  const double beta = (y75 - y25) / (g(0.75) - g(0.25));
  const double a = y50 - beta * g(0.5);

  std::vector<double> out;
  out.reserve(m_samples);
  for (std::size_t i = 0; i < m_samples; ++i) {
    const double r = std::clamp(rng.uniform(), 1e-12, 1.0 - 1e-12);
    out.push_back(a - beta * std::log(-std::log(r)));
  }
  return out;
}

}  // namespace expedition::belief
