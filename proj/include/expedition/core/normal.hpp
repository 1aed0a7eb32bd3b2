#pragma once

#include <cmath>

namespace expedition {

inline constexpr double kInvSqrtTwoPi = 0.39894228040143267794;
inline constexpr double kLogTwoPi = 1.83787706640934548356;

inline double norm_pdf(double x) { return kInvSqrtTwoPi * std::exp(-0.5 * x * x); }

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

namespace detail {
// Lower-tail asymptotic series factor: Phi(x) = phi(x)/(-x) * S(x) for x << 0.
inline double lower_tail_series(double x) {
  const double u = 1.0 / (x * x);
  return 1.0 + u * (-1.0 + u * (3.0 + u * (-15.0 + u * 105.0)));
}
}  // namespace detail

/// log Phi(x), stable into the deep lower tail.
inline double log_norm_cdf(double x) {
  if (x >= -20.0) return std::log(norm_cdf(x));
  return -0.5 * x * x - 0.5 * kLogTwoPi - std::log(-x) +
         std::log(detail::lower_tail_series(x));
}

/// phi(x) / Phi(x), stable into the deep lower tail.
inline double norm_pdf_cdf_ratio(double x) {
  if (x >= -20.0) return norm_pdf(x) / norm_cdf(x);
  return -x / detail::lower_tail_series(x);
}

}  // namespace expedition
