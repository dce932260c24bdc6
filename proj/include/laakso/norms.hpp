#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace laakso {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ‖a − b‖_p for p in [1, ∞]; p = kInfinity selects the sup-norm.
inline double lp_distance(std::span<const double> a, std::span<const double> b, double p) {
  const std::size_t d = a.size();
  if (p == 2.0) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double t = a[k] - b[k];
      s += t * t;
    }
    return std::sqrt(s);
  }
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t k = 0; k < d; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += std::abs(a[k] - b[k]);
    return s;
  }
  // Scale by the largest component so pow() does not under/overflow.
  double m = 0.0;
  for (std::size_t k = 0; k < d; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) s += std::pow(std::abs(a[k] - b[k]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

inline double lp_norm(std::span<const double> a, double p) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  if (m == 0.0 || std::isinf(p)) return m;
  if (p == 2.0) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double v : a) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

}  // namespace laakso
