#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "expedition/core/error.hpp"
#include "expedition/core/normal.hpp"

namespace expedition::planner {

namespace detail {

// One max-value term gamma*phi(gamma)/(2 Phi(gamma)) - ln Phi(gamma),
// evaluated jointly in the deep lower tail where the two parts cancel.
inline double mvi_term(double g) {
  if (g > 40.0) return 0.0;
  if (g >= -20.0) return 0.5 * g * norm_pdf_cdf_ratio(g) - log_norm_cdf(g);
  const double u = 1.0 / (g * g);
  const double s = expedition::detail::lower_tail_series(g);
  return (-0.5 + u * (1.5 - 7.5 * u)) / s + std::log(-g) + 0.5 * kLogTwoPi - std::log(s);
}

}  // namespace detail

/* Max-value information reward of sampling a point whose posterior is
 * N(mu, sigma^2), against sampled field maxima {z*_m}:
 *
 *   (1/M) sum_m [ g_m phi(g_m)/(2 Phi(g_m)) - ln Phi(g_m) ],
 *   g_m = (z*_m - mu) / max(sigma, 1e-9)
 *
 * clamped below at zero.
 */
inline double mvi_reward(double mu, double sigma, std::span<const double> maxvals) {
  if (maxvals.empty()) throw ValidationError("mvi_reward: empty max-value sample list");
  if (!(sigma >= 0.0)) throw ValidationError("mvi_reward: sigma must be >= 0");
  const double s = std::max(sigma, 1e-9);
  double acc = 0.0;
  for (double z : maxvals) acc += detail::mvi_term((z - mu) / s);
  return std::max(acc / static_cast<double>(maxvals.size()), 0.0);
}

}  // namespace expedition::planner
