#pragma once

/**
 * @file engine.hpp
 * @brief Forward simulation, the top process, rank-1 detection along products,
 * backward coupling and the coboundary sample.
 *
 * Indexing: a forward stream yields A_0, A_1, A_2, ... and x(k+1) = A_k x(k).
 * "Product of the first N draws" means B_N ⋯ B_1 with B_1 applied first.
 * In that convention:
 *   - forward coupling time R = min{ n : A_{n-1} ⋯ A_1 has rank 1 }
 *     (n = 1 is the empty product, rank 1 only when d = 1);
 *   - the backward stream yields A_0, A_{-1}, A_{-2}, ... and
 *     N = min{ n : A_{-1} ⋯ A_{-n} has rank 1 }.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "mpx/algebra.hpp"
#include "mpx/error.hpp"
#include "mpx/models.hpp"
#include "mpx/parallel.hpp"

namespace mpx {

inline constexpr std::size_t kDefaultCap = 10'000;
inline constexpr std::size_t kStreamingThreshold = 1'000'000;

// ---------------------------------------------------------------------------
// Forward simulation

enum class RecordMode { automatic, recording, streaming };

struct Trajectory {
  StateVector x0;
  std::vector<StateVector> states;  // x(0..n); empty in streaming mode
  std::vector<double> xi;           // ξ(A_k, x̄(k)), k < n
  std::vector<double> tops;         // ψ(x(k)), k <= n
  StateVector final_state;
  std::uint64_t replica = 0;
  ModelKind kind = ModelKind::finite_support_iid;
  bool streaming = false;

  std::size_t steps() const noexcept { return xi.size(); }
};

/// x(0) = x0, x(k+1) = A_k x(k). Runs above kStreamingThreshold steps never record states.
inline Trajectory run_srs(const ModelSpec& spec, const StateVector& x0, std::size_t n,
                          std::uint64_t replica, RecordMode mode = RecordMode::automatic) {
  if (x0.dim() != spec.dim)
    throw DimensionError("run_srs: x0 has dim " + std::to_string(x0.dim()) + ", model dim is " +
                         std::to_string(spec.dim));
  Trajectory t;
  t.x0 = x0;
  t.replica = replica;
  t.kind = spec.kind;
  t.streaming = mode == RecordMode::streaming || n > kStreamingThreshold;
  t.xi.reserve(n);
  t.tops.reserve(n + 1);
  if (!t.streaming) t.states.reserve(n + 1);

  OperatorStream stream(spec, replica);
  StateVector x = x0;
  double top = psi(x);
  t.tops.push_back(top);
  if (!t.streaming) t.states.push_back(x);
  for (std::size_t k = 0; k < n; ++k) {
    x = mp_apply(stream.next(), x);
    const double next_top = psi(x);
    t.xi.push_back(next_top - top);
    t.tops.push_back(next_top);
    top = next_top;
    if (!t.streaming) t.states.push_back(x);
  }
  t.final_state = std::move(x);
  return t;
}

/// x(n, x0) in O(d) memory.
inline StateVector srs_endpoint(const ModelSpec& spec, const StateVector& x0, std::size_t n,
                                std::uint64_t replica) {
  if (x0.dim() != spec.dim) throw DimensionError("srs_endpoint: dimension mismatch");
  OperatorStream stream(spec, replica);
  StateVector x = x0;
  for (std::size_t k = 0; k < n; ++k) x = mp_apply(stream.next(), x);
  return x;
}

/// x(n_i, x0) for each n_i of an ascending list, from a single pass over the stream.
inline std::vector<StateVector> srs_checkpoints(const ModelSpec& spec, const StateVector& x0,
                                                std::span<const std::size_t> steps,
                                                std::uint64_t replica) {
  if (x0.dim() != spec.dim) throw DimensionError("srs_checkpoints: dimension mismatch");
  if (!std::is_sorted(steps.begin(), steps.end()))
    throw ValidationError("srs_checkpoints: steps must be ascending");
  OperatorStream stream(spec, replica);
  std::vector<StateVector> out;
  out.reserve(steps.size());
  StateVector x = x0;
  std::size_t k = 0;
  for (std::size_t target : steps) {
    for (; k < target; ++k) x = mp_apply(stream.next(), x);
    out.push_back(x);
  }
  return out;
}

/// CSV with columns step, psi, xi, x_1..x_d. The last row has an empty xi.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  if (t.streaming) throw ValidationError("trajectory CSV needs recording mode");
  const std::size_t d = t.x0.dim();
  out << "step,psi,xi";
  for (std::size_t i = 1; i <= d; ++i) out << ",x_" << i;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    out << k << ',' << t.tops[k] << ',';
    if (k < t.xi.size()) out << t.xi[k];
    for (double v : t.states[k]) out << ',' << v;
    out << '\n';
  }
  out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Top process  x_st = ψ(A_{t-1} ⋯ A_s 0)

inline double top_process(std::span<const MaxPlusMatrix> ops, std::size_t s, std::size_t t) {
  if (s >= t) throw ValidationError("top_process: need s < t");
  if (t > ops.size()) throw ValidationError("top_process: t beyond recorded operators");
  StateVector x = StateVector::zeros(ops[s].dim());
  for (std::size_t k = s; k < t; ++k) x = mp_apply(ops[k], x);
  return psi(x);
}

/// Draws the first t operators of forward stream `replica` and evaluates x_st.
inline double top_process(const ModelSpec& spec, std::size_t s, std::size_t t, std::uint64_t replica) {
  if (s >= t) throw ValidationError("top_process: need s < t");
  OperatorStream stream(spec, replica);
  std::vector<MaxPlusMatrix> ops;
  ops.reserve(t);
  for (std::size_t k = 0; k < t; ++k) ops.push_back(stream.next());
  return top_process(ops, s, t);
}

// ---------------------------------------------------------------------------
// Forward coupling

struct ForwardCoupling {
  std::size_t R = 0;
  double Z = 0.0;  // ψ(A_R ⋯ A_0 0) - ψ(A_R ⋯ A_1 0)
};

inline ForwardCoupling forward_coupling(const ModelSpec& spec, StreamKey key, std::size_t cap) {
  if (cap < 1) throw ValidationError("cap must be >= 1");
  key.direction = Direction::forward;
  OperatorStream stream(spec, key);
  const std::size_t d = spec.dim;
  const StateVector zero = StateVector::zeros(d);
  StateVector with_a0 = mp_apply(stream.next(), zero);  // A_{n-1} ⋯ A_1 A_0 0
  StateVector without_a0 = zero;                         // A_{n-1} ⋯ A_1 0
  std::optional<MaxPlusMatrix> product;                  // A_{n-1} ⋯ A_1, empty = identity
  for (std::size_t n = 1; n <= cap; ++n) {
    const bool rank_one = product ? is_rank_one(*product) : d == 1;
    if (rank_one) {
      const MaxPlusMatrix a_r = stream.next();
      return {n, psi(mp_apply(a_r, with_a0)) - psi(mp_apply(a_r, without_a0))};
    }
    const MaxPlusMatrix a = stream.next();
    product = product ? mp_compose(a, *product) : a;
    with_a0 = mp_apply(a, with_a0);
    without_a0 = mp_apply(a, without_a0);
  }
  throw CapExceeded(cap);
}

/// R = min{ n : A_{n-1} ⋯ A_1 has rank 1 }, on forward stream `replica`.
inline std::size_t forward_coupling_time(const ModelSpec& spec, std::uint64_t replica,
                                         std::size_t cap = kDefaultCap) {
  return forward_coupling(spec, StreamKey{replica, Direction::forward, 0}, cap).R;
}

// ---------------------------------------------------------------------------
// Backward coupling

struct CouplingResult {
  std::size_t N = 0;                 // backward coupling horizon
  ProjectivePoint Y;                 // class of A_{-1} ⋯ A_{-N} 0
  std::size_t R = 0;                 // forward coupling time (independent stream)
  double Z = 0.0;                    // coboundary sample
  std::vector<double> partial_norms; // |A_{-k} 0|_P, k = 1..N
  MaxPlusMatrix a0;                  // time-0 operator, jointly stationary with Y
  std::vector<MaxPlusMatrix> backward_ops;  // A_{-1}, ..., A_{-N}
};

/**
 * Samples the stationary projective state by running products of past
 * operators until they collapse to rank 1. The forward stream of the same
 * replica supplies R and the coboundary sample Z.
 */
inline CouplingResult backward_couple(const ModelSpec& spec, std::uint64_t replica,
                                      std::size_t cap = kDefaultCap) {
  if (cap < 1) throw ValidationError("cap must be >= 1");
  OperatorStream past(spec, StreamKey{replica, Direction::backward, 0});
  CouplingResult res;
  res.a0 = past.next();
  const StateVector zero = StateVector::zeros(spec.dim);
  std::optional<MaxPlusMatrix> product;
  for (std::size_t n = 1; n <= cap; ++n) {
    MaxPlusMatrix a = past.next();
    res.partial_norms.push_back(projective_norm(mp_apply(a, zero)));
    product = product ? mp_compose(*product, a) : a;
    res.backward_ops.push_back(std::move(a));
    if (is_rank_one(*product)) {
      res.N = n;
      res.Y = ProjectivePoint(mp_apply(*product, zero));
      const auto fwd = forward_coupling(spec, StreamKey{replica, Direction::forward, 0}, cap);
      res.R = fwd.R;
      res.Z = fwd.Z;
      return res;
    }
  }
  throw CapExceeded(cap);
}

// ---------------------------------------------------------------------------
// Semigroup enumeration (finite support)

struct SemigroupElement {
  MaxPlusMatrix matrix;
  std::size_t depth = 0;  // shortest word length found
};

struct Semigroup {
  std::vector<SemigroupElement> elements;
  std::size_t depth = 0;
  bool truncated = false;  // hit the element cap before finishing `depth`
};

namespace detail {

/// Key of a matrix modulo translation by c·1·1ᵀ: subtract the first finite
/// entry (row-major) and quantize to a 1e-9 grid.
inline std::vector<long long> translation_key(const MaxPlusMatrix& m) {
  const auto e = m.entries();
  double base = 0.0;
  for (double v : e)
    if (!is_null(v)) {
      base = v;
      break;
    }
  std::vector<long long> key;
  key.reserve(e.size());
  for (double v : e)
    key.push_back(is_null(v) ? std::numeric_limits<long long>::min()
                             : std::llround((v - base) / kProjEps));
  return key;
}

}  // namespace detail

/// All products of atoms of word length 1..depth, deduplicated modulo translation.
inline Semigroup enumerate_semigroup(std::span<const MaxPlusMatrix> atoms, std::size_t depth,
                                     std::size_t max_elements = 100'000) {
  Semigroup sg;
  std::map<std::vector<long long>, std::size_t> seen;
  std::vector<std::size_t> frontier;
  auto add = [&](MaxPlusMatrix m, std::size_t level) {
    auto key = detail::translation_key(m);
    if (seen.contains(key)) return true;
    if (sg.elements.size() >= max_elements) {
      sg.truncated = true;
      return false;
    }
    seen.emplace(std::move(key), sg.elements.size());
    frontier.push_back(sg.elements.size());
    sg.elements.push_back({std::move(m), level});
    return true;
  };
  for (const auto& a : atoms)
    if (!add(a, 1)) return sg;
  sg.depth = depth >= 1 ? 1 : 0;
  for (std::size_t level = 2; level <= depth && !frontier.empty(); ++level) {
    std::vector<std::size_t> prev;
    prev.swap(frontier);
    for (std::size_t idx : prev)
      for (const auto& a : atoms) {
        MaxPlusMatrix m = mp_compose(a, sg.elements[idx].matrix);
        if (!add(std::move(m), level)) return sg;
      }
    sg.depth = level;
  }
  sg.depth = depth;
  return sg;
}

// ---------------------------------------------------------------------------
// Memory-loss probe

struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
};

inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct MlpLevel {
  std::size_t N = 0;
  std::size_t rank_one = 0;
  double estimate = 0.0;
  WilsonInterval ci;
};

struct ExactMlp {
  std::size_t searched_depth = 0;
  std::size_t distinct_elements = 0;
  bool truncated = false;
  std::optional<std::size_t> min_rank_one_depth;  // set: MLP certain
};

struct MlpReport {
  std::size_t horizon = 0;
  std::size_t trials = 0;
  std::vector<MlpLevel> levels;  // N = 1..horizon
  bool detected = false;         // some Wilson lower bound > 0
  std::optional<std::size_t> first_detected;
  std::optional<ExactMlp> exact;  // finite_support_iid only
};

/// Monte Carlo estimate of P(B_N ⋯ B_1 has rank 1) for N <= horizon, plus an
/// exact word search for finite-support i.i.d. models.
inline MlpReport mlp_probe(const ModelSpec& spec, std::size_t horizon, std::size_t trials,
                           std::size_t workers = 1) {
  if (trials < 1) throw ValidationError("mlp_probe: trials must be >= 1");
  MlpReport rep;
  rep.horizon = horizon;
  rep.trials = trials;
  // First N at which the running product has rank 1, or horizon + 1.
  auto first_hit = map_replicas(trials, workers, [&](std::size_t r) {
    OperatorStream stream(spec, r);
    std::optional<MaxPlusMatrix> product;
    for (std::size_t n = 1; n <= horizon; ++n) {
      MaxPlusMatrix a = stream.next();
      product = product ? mp_compose(a, *product) : a;
      if (is_rank_one(*product)) return n;
    }
    return horizon + 1;
  });
  std::vector<std::size_t> hits(horizon + 2, 0);
  for (std::size_t h : first_hit) ++hits[h];
  std::size_t cumulative = 0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    cumulative += hits[n];
    MlpLevel lvl{n, cumulative, static_cast<double>(cumulative) / static_cast<double>(trials),
                 wilson_interval(cumulative, trials)};
    if (lvl.ci.lo > 0.0 && !rep.detected) {
      rep.detected = true;
      rep.first_detected = n;
    }
    rep.levels.push_back(lvl);
  }
  if (spec.kind == ModelKind::finite_support_iid) {
    const auto& fs = std::get<FiniteSupport>(spec.params);
    const Semigroup sg = enumerate_semigroup(fs.atoms, horizon);
    ExactMlp ex{sg.depth, sg.elements.size(), sg.truncated, std::nullopt};
    for (const auto& el : sg.elements)
      if (is_rank_one(el.matrix) && (!ex.min_rank_one_depth || el.depth < *ex.min_rank_one_depth))
        ex.min_rank_one_depth = el.depth;
    rep.exact = ex;
  }
  return rep;
}

}  // namespace mpx
