#pragma once

// Kolmogorov-Smirnov distances used as fixed-threshold goodness-of-fit checks.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace mpx {

inline double normal_cdf(double x, double sigma = 1.0) {
  return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2));
}

/// sup_x |F_n(x) - Φ(x/σ)| for the empirical CDF F_n of `samples`.
inline double ks_distance_normal(std::span<const double> samples, double sigma) {
  if (samples.empty()) throw std::invalid_argument("ks_distance_normal: no samples");
  if (!(sigma > 0.0)) throw std::invalid_argument("ks_distance_normal: sigma must be > 0");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = normal_cdf(s[i], sigma);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// sup_x |F_a(x) - F_b(x)|; ties are handled by evaluating after each distinct value.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace mpx
