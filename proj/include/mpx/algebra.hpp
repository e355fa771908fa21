#pragma once

/**
 * @file algebra.hpp
 * @brief Max-plus matrices acting on R^d, and the projective quotient R^d / R·1.
 *
 * A max-plus matrix A with no all-(-inf) row acts on x in R^d by
 *
 *   (Ax)_i = max_j (A_ij + x_j)
 *
 * which is isotone and additively homogeneous (a topical operator).
 * Composition of operators is the max-plus matrix product.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpx/error.hpp"

namespace mpx {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Absolute tolerance for projective equality and rank-1 column comparison.
inline constexpr double kProjEps = 1e-9;

inline bool is_null(double v) noexcept { return v == kNegInf; }

class MaxPlusMatrix;
class ProjectivePoint;

class StateVector {
 public:
  StateVector() = default;

  explicit StateVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw DimensionError("state vector must have dim >= 1");
    for (double v : coords_)
      if (!std::isfinite(v)) throw ValidationError("state vector coordinates must be finite");
  }

  StateVector(std::initializer_list<double> coords)
      : StateVector(std::vector<double>(coords)) {}

  static StateVector zeros(std::size_t dim) { return StateVector(std::vector<double>(dim, 0.0)); }
  static StateVector constant(std::size_t dim, double c) {
    return StateVector(std::vector<double>(dim, c));
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  double max() const { return *std::max_element(coords_.begin(), coords_.end()); }
  double min() const { return *std::min_element(coords_.begin(), coords_.end()); }

  /// x + c·1
  StateVector shifted(double c) const {
    StateVector out = *this;
    for (double& v : out.coords_) v += c;
    return out;
  }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  // Trusted path for results of the max-plus action, which are finite by construction.
  struct Unchecked {};
  StateVector(std::vector<double> coords, Unchecked) : coords_(std::move(coords)) {}

  friend StateVector mp_apply(const MaxPlusMatrix&, const StateVector&);
  friend ProjectivePoint;

  std::vector<double> coords_;
};

/// Square matrix over (R ∪ {-inf}, max, +). Never holds an all-(-inf) row.
class MaxPlusMatrix {
 public:
  MaxPlusMatrix() = default;

  /// Row-major entries; throws ValidationError on NaN, +inf, or a row of -inf.
  MaxPlusMatrix(std::size_t dim, std::vector<double> entries)
      : dim_(dim), a_(std::move(entries)) {
    if (dim_ == 0) throw DimensionError("matrix dim must be >= 1");
    if (a_.size() != dim_ * dim_)
      throw DimensionError("matrix needs dim*dim entries, got " + std::to_string(a_.size()));
    validate();
  }

  MaxPlusMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    dim_ = rows.size();
    for (const auto& row : rows) {
      if (row.size() != dim_) throw DimensionError("matrix literal must be square");
      a_.insert(a_.end(), row.begin(), row.end());
    }
    if (dim_ == 0) throw DimensionError("matrix dim must be >= 1");
    validate();
  }

  static MaxPlusMatrix identity(std::size_t dim) {
    std::vector<double> e(dim * dim, kNegInf);
    for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 0.0;
    return MaxPlusMatrix(dim, std::move(e));
  }

  static MaxPlusMatrix constant(std::size_t dim, double c) {
    return MaxPlusMatrix(dim, std::vector<double>(dim * dim, c));
  }

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  std::span<const double> entries() const noexcept { return a_; }

  /// Adds c to every finite entry (the operator x -> Ax + c·1).
  MaxPlusMatrix shifted(double c) const {
    MaxPlusMatrix out = *this;
    for (double& v : out.a_)
      if (!is_null(v)) v += c;
    return out;
  }

  friend bool operator==(const MaxPlusMatrix&, const MaxPlusMatrix&) = default;

 private:
  struct Unchecked {};
  MaxPlusMatrix(std::size_t dim, std::vector<double> entries, Unchecked)
      : dim_(dim), a_(std::move(entries)) {}

  void validate() const {
    for (std::size_t i = 0; i < dim_; ++i) {
      bool finite_seen = false;
      for (std::size_t j = 0; j < dim_; ++j) {
        double v = a_[i * dim_ + j];
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
          throw ValidationError("matrix entries must be finite or -inf");
        finite_seen = finite_seen || !is_null(v);
      }
      if (!finite_seen)
        throw ValidationError("matrix has a -inf row (row " + std::to_string(i) + ")");
    }
  }

  friend MaxPlusMatrix mp_compose(const MaxPlusMatrix&, const MaxPlusMatrix&);

  std::size_t dim_ = 0;
  std::vector<double> a_;
};

/// (Ax)_i = max_j (A_ij + x_j)
inline StateVector mp_apply(const MaxPlusMatrix& a, const StateVector& x) {
  const std::size_t d = a.dim();
  if (x.dim() != d)
    throw DimensionError("mp_apply: matrix dim " + std::to_string(d) + " vs vector dim " +
                         std::to_string(x.dim()));
  std::vector<double> out(d, kNegInf);
  for (std::size_t i = 0; i < d; ++i) {
    double best = kNegInf;
    for (std::size_t j = 0; j < d; ++j) {
      double aij = a(i, j);
      if (is_null(aij)) continue;
      best = std::max(best, aij + x[j]);
    }
    out[i] = best;
  }
  return StateVector(std::move(out), StateVector::Unchecked{});
}

/// (A ⊗ B)_ij = max_k (A_ik + B_kj), so that (A ⊗ B)x = A(Bx).
inline MaxPlusMatrix mp_compose(const MaxPlusMatrix& a, const MaxPlusMatrix& b) {
  const std::size_t d = a.dim();
  if (b.dim() != d)
    throw DimensionError("mp_compose: dims " + std::to_string(d) + " and " +
                         std::to_string(b.dim()));
  std::vector<double> out(d * d, kNegInf);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      double aik = a(i, k);
      if (is_null(aik)) continue;
      for (std::size_t j = 0; j < d; ++j) {
        double bkj = b(k, j);
        if (is_null(bkj)) continue;
        double& slot = out[i * d + j];
        slot = std::max(slot, aik + bkj);
      }
    }
  }
  // A row of A has a finite A_ik and row k of B has a finite entry, so no null row.
  return MaxPlusMatrix(d, std::move(out), MaxPlusMatrix::Unchecked{});
}

/**
 * True iff the projective image of A is a single point.
 *
 * Certificate: every column is either all -inf or all finite, and the
 * finite columns are translates of one another (within eps). A column
 * mixing finite and -inf entries can be made to dominate on some rows
 * only, so its presence always separates projective images.
 */
inline bool is_rank_one(const MaxPlusMatrix& a, double eps = kProjEps) {
  const std::size_t d = a.dim();
  std::ptrdiff_t ref = -1;
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t finite = 0;
    for (std::size_t i = 0; i < d; ++i) finite += is_null(a(i, j)) ? 0 : 1;
    if (finite == 0) continue;
    if (finite != d) return false;
    if (ref < 0) {
      ref = static_cast<std::ptrdiff_t>(j);
      continue;
    }
    const auto r = static_cast<std::size_t>(ref);
    const double shift = a(0, j) - a(0, r);
    for (std::size_t i = 1; i < d; ++i)
      if (std::abs(a(i, j) - a(i, r) - shift) > eps) return false;
  }
  return true;
}

/// δ(x̄, ȳ) = max_i(x_i - y_i) + max_i(y_i - x_i)
inline double projective_distance(const StateVector& x, const StateVector& y) {
  if (x.dim() != y.dim()) throw DimensionError("projective_distance: dimension mismatch");
  double up = kNegInf, down = kNegInf;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    up = std::max(up, x[i] - y[i]);
    down = std::max(down, y[i] - x[i]);
  }
  return up + down;
}

/// |x|_P = max_i x_i - min_i x_i
inline double projective_norm(const StateVector& x) { return x.max() - x.min(); }

inline double psi(const StateVector& x) { return x.max(); }

/// Sup-norm distance, used by the nonexpansiveness checks.
inline double sup_distance(const StateVector& x, const StateVector& y) {
  if (x.dim() != y.dim()) throw DimensionError("sup_distance: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

/// Equivalence class of x modulo R·1, stored as the representative with max coordinate 0.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;

  explicit ProjectivePoint(const StateVector& x) : rep_(normalize(x)) {}

  std::size_t dim() const noexcept { return rep_.dim(); }
  const StateVector& rep() const noexcept { return rep_; }

  /// A lift of the point into R^d (the representative itself).
  StateVector lift() const { return rep_; }

  bool approx_equal(const ProjectivePoint& other, double eps = kProjEps) const {
    if (dim() != other.dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (std::abs(rep_[i] - other.rep_[i]) > eps) return false;
    return true;
  }

 private:
  static StateVector normalize(const StateVector& x) {
    const double top = x.max();
    std::vector<double> r(x.begin(), x.end());
    for (double& v : r) v -= top;
    return StateVector(std::move(r), StateVector::Unchecked{});
  }

  StateVector rep_;
};

/// x ↦ (ψ(x), x̄)
inline std::pair<double, ProjectivePoint> split(const StateVector& x) {
  return {psi(x), ProjectivePoint(x)};
}

inline StateVector unsplit(double height, const ProjectivePoint& p) {
  return p.rep().shifted(height);
}

/// ξ(A, x̄) = ψ(Ax) - ψ(x); depends on x only through its projective class.
inline double xi_increment(const MaxPlusMatrix& a, const StateVector& x) {
  return psi(mp_apply(a, x)) - psi(x);
}

}  // namespace mpx
