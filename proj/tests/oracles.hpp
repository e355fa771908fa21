#pragma once

// Reference implementations written independently of the library, used as
// ground truth in unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline Vec apply(const Mat& a, const Vec& x) {
  Vec y(a.size(), kNegInf);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (a[i][j] != kNegInf) y[i] = std::max(y[i], a[i][j] + x[j]);
  return y;
}

inline Mat compose(const Mat& a, const Mat& b) {
  const std::size_t d = a.size();
  Mat c(d, Vec(d, kNegInf));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        if (a[i][k] != kNegInf && b[k][j] != kNegInf) c[i][j] = std::max(c[i][j], a[i][k] + b[k][j]);
  return c;
}

inline double proj_dist(const Vec& x, const Vec& y) {
  double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    hi = std::max(hi, x[i] - y[i]);
    lo = std::min(lo, x[i] - y[i]);
  }
  return hi - lo;
}

/// Rank 1 iff the projective image is one point: probe with vectors that
/// isolate each column, plus random vectors.
inline bool probe_rank_one(const Mat& a, std::mt19937_64& rng, int random_probes = 100) {
  const std::size_t d = a.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : a)
    for (double v : row)
      if (v != kNegInf) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  const double big = 1e6 * std::max(1.0, hi - lo);
  std::vector<Vec> images;
  for (std::size_t j = 0; j < d; ++j) {
    Vec x(d, -big);
    x[j] = 0.0;
    images.push_back(oracle::apply(a, x));
  }
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int r = 0; r < random_probes; ++r) {
    Vec x(d);
    for (double& v : x) v = u(rng);
    images.push_back(oracle::apply(a, x));
  }
  for (std::size_t k = 1; k < images.size(); ++k)
    if (proj_dist(images[0], images[k]) > 1e-6) return false;
  return true;
}

/// Maximum mean weight over simple cycles of the weighted digraph of `a`.
inline double max_cycle_mean(const Mat& a) {
  const int d = static_cast<int>(a.size());
  double best = kNegInf;
  std::vector<int> path;
  std::vector<bool> used(d, false);
  std::function<void(int, int, double)> extend = [&](int start, int v, double w) {
    for (int u = start; u < d; ++u) {
      if (a[v][u] == kNegInf) continue;
      if (u == start) {
        best = std::max(best, (w + a[v][u]) / static_cast<double>(path.size()));
      } else if (!used[u]) {
        used[u] = true;
        path.push_back(u);
        extend(start, u, w + a[v][u]);
        path.pop_back();
        used[u] = false;
      }
    }
  };
  for (int s = 0; s < d; ++s) {
    used.assign(d, false);
    used[s] = true;
    path = {s};
    extend(s, s, 0.0);
  }
  return best;
}

/// Calls f on every d x d matrix with entries from `values` that has no all -inf row.
template <class F>
void for_each_matrix(std::size_t d, const Vec& values, F&& f) {
  const std::size_t cells = d * d, base = values.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) total *= base;
  Mat m(d, Vec(d));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t k = 0; k < cells; ++k) {
      m[k / d][k % d] = values[c % base];
      c /= base;
    }
    bool ok = true;
    for (const auto& row : m)
      ok = ok && std::any_of(row.begin(), row.end(), [](double v) { return v != kNegInf; });
    if (ok) f(m);
  }
}

}  // namespace oracle
