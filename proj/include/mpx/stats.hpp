#pragma once

/**
 * @file stats.hpp
 * @brief Estimators for the cycle time γ and the CLT scale σ, and executable
 * checks of the limit theorems: Gaussian fluctuations, independence from the
 * initial condition, degeneracy (σ = 0) and tightness.
 *
 * Every estimator reduces per-replica results in replica-id order, so the
 * output does not depend on the number of worker threads.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mpx/algebra.hpp"
#include "mpx/engine.hpp"
#include "mpx/ks.hpp"
#include "mpx/models.hpp"
#include "mpx/parallel.hpp"
#include "mpx/random.hpp"

namespace mpx {

namespace detail {

inline double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Standard error of the mean (0 for fewer than two values).
inline double stderr_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

/// Nearest-rank quantile of an unsorted sample.
inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  rank = std::clamp<std::size_t>(rank, 1, v.size());
  return v[rank - 1];
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Cycle time

enum class GammaMethod { lln_top, lln_bottom, coupled_xi };

inline std::string to_string(GammaMethod m) {
  switch (m) {
    case GammaMethod::lln_top: return "lln_top";
    case GammaMethod::lln_bottom: return "lln_bottom";
    case GammaMethod::coupled_xi: return "coupled_xi";
  }
  return "unknown";
}

struct GammaEstimate {
  GammaMethod method = GammaMethod::lln_top;
  double gamma_hat = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;        // steps per replica (lln) or 0 (coupled)
  std::size_t count = 0;    // replicas or coupling samples
  std::size_t window = 0;   // lln: gamma_hat = (stat(x(n)) - stat(x(n - window))) / window
  double gamma_full = 0.0;  // lln: stat(x(n, 0)) / n
};

struct LlnGamma {
  GammaEstimate top;
  GammaEstimate bottom;
  double diff_stderr = 0.0;  // standard error of the paired difference top - bottom
  bool disagree = false;     // |top - bottom| > 3 diff_stderr
};

/// Largest multiple of lcm(1..d) not above n/2, or max(1, n/2) if there is none.
/// Periodic regimes of deterministic sequences have period <= d, so such a
/// window covers whole periods.
inline std::size_t lln_window(std::size_t n, std::size_t dim) {
  const std::size_t half = n / 2;
  std::size_t l = 1;
  for (std::size_t k = 2; k <= dim && l <= half; ++k) l = std::lcm(l, k);
  if (l <= half) return half / l * l;
  return std::max<std::size_t>(1, half);
}

/**
 * Law-of-large-numbers estimate of γ from x(n, 0): the growth rate of the top
 * coordinate (and of the bottom coordinate) over the trailing window of the
 * run, averaged over replicas.
 */
inline LlnGamma estimate_gamma_lln(const ModelSpec& spec, std::size_t n, std::size_t replicas,
                                   std::size_t workers = 1) {
  if (n < 1) throw ValidationError("estimate_gamma_lln: n must be >= 1");
  if (replicas < 1) throw ValidationError("estimate_gamma_lln: replicas must be >= 1");
  const std::size_t w = lln_window(n, spec.dim);
  const std::vector<std::size_t> steps{n - w, n};
  struct Row {
    double top = 0, bottom = 0, top_full = 0, bottom_full = 0;
  };
  const auto zero = StateVector::zeros(spec.dim);
  auto rows = map_replicas(replicas, workers, [&](std::size_t r) {
    const auto xs = srs_checkpoints(spec, zero, steps, r);
    const double wd = static_cast<double>(w), nd = static_cast<double>(n);
    return Row{(xs[1].max() - xs[0].max()) / wd, (xs[1].min() - xs[0].min()) / wd,
               xs[1].max() / nd, xs[1].min() / nd};
  });
  std::vector<double> top, bottom, top_full, bottom_full, diff;
  for (const Row& r : rows) {
    top.push_back(r.top);
    bottom.push_back(r.bottom);
    top_full.push_back(r.top_full);
    bottom_full.push_back(r.bottom_full);
    diff.push_back(r.top - r.bottom);
  }
  LlnGamma out;
  out.top = {GammaMethod::lln_top, detail::mean_of(top), detail::stderr_of(top), n, replicas, w,
             detail::mean_of(top_full)};
  out.bottom = {GammaMethod::lln_bottom, detail::mean_of(bottom), detail::stderr_of(bottom), n,
                replicas, w, detail::mean_of(bottom_full)};
  out.diff_stderr = detail::stderr_of(diff);
  out.disagree = std::abs(detail::mean_of(diff)) > 3.0 * out.diff_stderr + 1e-9;
  return out;
}

/// γ = E ξ(A_0, Ȳ) with Ȳ from backward coupling and A_0 the time-0 operator of
/// the same stationary sequence.
inline GammaEstimate estimate_gamma_coupled(const ModelSpec& spec, std::size_t samples,
                                            std::size_t cap = kDefaultCap, std::size_t workers = 1) {
  if (samples < 1) throw ValidationError("estimate_gamma_coupled: samples must be >= 1");
  auto xi = map_replicas(samples, workers, [&](std::size_t r) {
    const CouplingResult c = backward_couple(spec, r, cap);
    return xi_increment(c.a0, c.Y.lift());
  });
  return {GammaMethod::coupled_xi, detail::mean_of(xi), detail::stderr_of(xi), 0, samples, 0, 0.0};
}

// ---------------------------------------------------------------------------
// CLT scale

struct SigmaEstimate {
  double sigma_hat = 0.0;
  double mad = 0.0;  // mean over replicas of |ψ(x(n,0)) - nγ| / √n
  double gamma = 0.0;
  std::size_t n = 0;
  std::size_t replicas = 0;
  double ci_lo = 0.0, ci_hi = 0.0;  // bootstrap percentile interval (95%)
  double heuristic_sigma = 0.0;     // sqrt(mean (ψ - nγ)² / n); heuristic
};

inline constexpr std::size_t kBootstrapResamples = 1000;

namespace detail {

inline SigmaEstimate sigma_from_deviations(std::span<const double> dev, double gamma, std::size_t n,
                                           std::uint64_t seed) {
  // dev[r] = (ψ(x(n)) - nγ) / √n
  SigmaEstimate s;
  s.gamma = gamma;
  s.n = n;
  s.replicas = dev.size();
  const double scale = std::sqrt(std::numbers::pi / 2.0);
  double abs_sum = 0.0, sq_sum = 0.0;
  for (double v : dev) {
    abs_sum += std::abs(v);
    sq_sum += v * v;
  }
  const double m = static_cast<double>(dev.size());
  s.mad = abs_sum / m;
  s.sigma_hat = s.mad * scale;
  s.heuristic_sigma = std::sqrt(sq_sum / m);

  Rng rng(derive_seed(seed, StreamKey{0, Direction::forward, 0xB0075ULL}));
  std::vector<double> boot(kBootstrapResamples);
  for (double& b : boot) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dev.size(); ++k) acc += std::abs(dev[rng.index(dev.size())]);
    b = acc / m * scale;
  }
  std::sort(boot.begin(), boot.end());
  s.ci_lo = std::min(boot[static_cast<std::size_t>(0.025 * kBootstrapResamples)], s.sigma_hat);
  s.ci_hi = std::max(boot[static_cast<std::size_t>(0.975 * kBootstrapResamples) - 1], s.sigma_hat);
  return s;
}

}  // namespace detail

/// σ̂ = √(π/2) · mean |ψ(x(n,0)) - nγ| / √n, with a bootstrap interval.
inline SigmaEstimate estimate_sigma_mad(const ModelSpec& spec, double gamma, std::size_t n,
                                        std::size_t replicas, std::size_t workers = 1) {
  if (n < 1) throw ValidationError("estimate_sigma_mad: n must be >= 1");
  if (replicas < 2) throw ValidationError("estimate_sigma_mad: need at least 2 replicas");
  const auto zero = StateVector::zeros(spec.dim);
  const double root_n = std::sqrt(static_cast<double>(n));
  auto dev = map_replicas(replicas, workers, [&](std::size_t r) {
    return (psi(srs_endpoint(spec, zero, n, r)) - static_cast<double>(n) * gamma) / root_n;
  });
  return detail::sigma_from_deviations(dev, gamma, n, spec.seed);
}

// ---------------------------------------------------------------------------
// Tightness

enum class TightnessVerdict { tight_consistent, diffusive, inconclusive };

inline std::string to_string(TightnessVerdict v) {
  switch (v) {
    case TightnessVerdict::tight_consistent: return "tight-consistent";
    case TightnessVerdict::diffusive: return "diffusive";
    case TightnessVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct TightnessReport {
  double gamma = 0.0;
  std::size_t replicas = 0;
  std::vector<std::size_t> grid;
  std::vector<double> p95;  // 95th percentile of ‖x(n,0) - nγ1‖∞ per grid point
  double exponent = 0.0;    // least-squares slope of log p95 against log n
  TightnessVerdict verdict = TightnessVerdict::inconclusive;
};

inline std::vector<std::size_t> power_of_two_grid(unsigned lo_exp, unsigned hi_exp) {
  std::vector<std::size_t> g;
  for (unsigned e = lo_exp; e <= hi_exp; ++e) g.push_back(std::size_t{1} << e);
  return g;
}

/**
 * Bounded percentiles (max <= 2 × median across the grid) read as
 * tight-consistent; a log-log slope in [0.4, 0.6] reads as diffusive.
 */
inline TightnessReport tightness_probe(const ModelSpec& spec, double gamma, std::vector<std::size_t> grid,
                                       std::size_t replicas, std::size_t workers = 1) {
  if (grid.empty()) throw ValidationError("tightness_probe: empty grid");
  if (replicas < 1) throw ValidationError("tightness_probe: replicas must be >= 1");
  std::sort(grid.begin(), grid.end());
  const auto zero = StateVector::zeros(spec.dim);
  auto per_replica = map_replicas(replicas, workers, [&](std::size_t r) {
    const auto xs = srs_checkpoints(spec, zero, grid, r);
    std::vector<double> dev(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double shift = static_cast<double>(grid[g]) * gamma;
      double m = 0.0;
      for (double v : xs[g]) m = std::max(m, std::abs(v - shift));
      dev[g] = m;
    }
    return dev;
  });
  TightnessReport rep;
  rep.gamma = gamma;
  rep.replicas = replicas;
  rep.grid = grid;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> col;
    col.reserve(replicas);
    for (const auto& d : per_replica) col.push_back(d[g]);
    rep.p95.push_back(detail::quantile(std::move(col), 0.95));
  }
  // Slope over points with a positive percentile.
  std::vector<double> lx, ly;
  for (std::size_t g = 0; g < grid.size(); ++g)
    if (rep.p95[g] > 0.0 && grid[g] > 0) {
      lx.push_back(std::log(static_cast<double>(grid[g])));
      ly.push_back(std::log(rep.p95[g]));
    }
  if (lx.size() >= 2) {
    const double mx = detail::mean_of(lx), my = detail::mean_of(ly);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sxy += (lx[k] - mx) * (ly[k] - my);
      sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    rep.exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  const double max_p = *std::max_element(rep.p95.begin(), rep.p95.end());
  const double med_p = detail::median(rep.p95);
  if (max_p <= 2.0 * med_p + 1e-9)
    rep.verdict = TightnessVerdict::tight_consistent;
  else if (rep.exponent >= 0.4 && rep.exponent <= 0.6)
    rep.verdict = TightnessVerdict::diffusive;
  else
    rep.verdict = TightnessVerdict::inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------
// CLT check

enum class CltVerdict { pass, fail, degenerate };

inline std::string to_string(CltVerdict v) {
  switch (v) {
    case CltVerdict::pass: return "pass";
    case CltVerdict::fail: return "fail";
    case CltVerdict::degenerate: return "degenerate";
  }
  return "unknown";
}

struct CltOptions {
  double threshold = 0.06;          // KS distance threshold (calibrated for M = 1000)
  std::size_t cap = kDefaultCap;    // MLP pre-check budget
  bool assume_mlp = false;          // skip the forward-coupling pre-check
  std::optional<double> gamma;      // otherwise estimated from the primary sample set
  double degenerate_sigma = 1e-6;   // σ̂ below this routes to tightness_probe
  std::size_t workers = 1;
};

struct CltReport {
  std::size_t n = 0;
  std::size_t replicas = 0;
  double gamma_hat = 0.0;
  SigmaEstimate sigma;
  std::vector<double> samples;      // (ψ(x(n,x0)) - nγ̂)/√n
  std::vector<double> samples_alt;  // same replicas, second initial condition
  double ks_distance = 0.0;         // samples vs N(0, σ̂²)
  double ks_distance_alt = 0.0;     // samples_alt vs N(0, σ̂²)
  double ks_two_sample = 0.0;       // samples vs samples_alt
  double threshold = 0.06;
  CltVerdict verdict = CltVerdict::fail;
  std::optional<TightnessReport> tightness;
};

/**
 * Normalized fluctuations (ψ(x(n,x0)) - nγ̂)/√n over M replicas, compared to
 * N(0, σ̂²), and against the same replicas started from a second initial
 * condition. A vanishing σ̂ is routed to the tightness probe.
 */
inline CltReport clt_test(const ModelSpec& spec, std::size_t n, std::size_t replicas,
                          const StateVector& x0, const StateVector& x0_alt, const CltOptions& opt = {}) {
  if (n < 1) throw ValidationError("clt_test: n must be >= 1");
  if (replicas < 2) throw ValidationError("clt_test: need at least 2 replicas");
  if (x0.dim() != spec.dim || x0_alt.dim() != spec.dim)
    throw DimensionError("clt_test: initial conditions must have the model dim");
  if (!opt.assume_mlp) forward_coupling_time(spec, 0, opt.cap);

  auto tops = map_replicas(replicas, opt.workers, [&](std::size_t r) {
    return std::pair{psi(srs_endpoint(spec, x0, n, r)), psi(srs_endpoint(spec, x0_alt, n, r))};
  });
  const double nd = static_cast<double>(n), root_n = std::sqrt(nd);
  CltReport rep;
  rep.n = n;
  rep.replicas = replicas;
  rep.threshold = opt.threshold;
  if (opt.gamma) {
    rep.gamma_hat = *opt.gamma;
  } else {
    double acc = 0.0;
    for (const auto& t : tops) acc += t.first;
    rep.gamma_hat = acc / static_cast<double>(replicas) / nd;
  }
  for (const auto& [a, b] : tops) {
    rep.samples.push_back((a - nd * rep.gamma_hat) / root_n);
    rep.samples_alt.push_back((b - nd * rep.gamma_hat) / root_n);
  }
  rep.sigma = detail::sigma_from_deviations(rep.samples, rep.gamma_hat, n, spec.seed);
  rep.ks_two_sample = ks_two_sample(rep.samples, rep.samples_alt);
  if (rep.sigma.sigma_hat < opt.degenerate_sigma) {
    rep.verdict = CltVerdict::degenerate;
    rep.tightness = tightness_probe(spec, rep.gamma_hat, power_of_two_grid(6, 10), replicas, opt.workers);
    return rep;
  }
  rep.ks_distance = ks_distance_normal(rep.samples, rep.sigma.sigma_hat);
  rep.ks_distance_alt = ks_distance_normal(rep.samples_alt, rep.sigma.sigma_hat);
  rep.verdict = rep.ks_distance < opt.threshold && rep.ks_two_sample < opt.threshold
                    ? CltVerdict::pass
                    : CltVerdict::fail;
  return rep;
}

// ---------------------------------------------------------------------------
// Degeneracy (σ = 0) for finite-support i.i.d. models

enum class DegeneracyVerdict { degenerate, non_degenerate, inconclusive };

inline std::string to_string(DegeneracyVerdict v) {
  switch (v) {
    case DegeneracyVerdict::degenerate: return "degenerate";
    case DegeneracyVerdict::non_degenerate: return "non_degenerate";
    case DegeneracyVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct DegeneracyWitness {
  MaxPlusMatrix theta;
  std::size_t atom = 0;
  MaxPlusMatrix theta_prime;
  StateVector lhs;        // θ A θ' 0
  StateVector rhs;        // θ θ' 0 + γ 1
  double deviation = 0.0; // ‖lhs - rhs‖∞
};

struct DegeneracyReport {
  DegeneracyVerdict verdict = DegeneracyVerdict::inconclusive;
  std::string reason;
  std::size_t depth = 0;
  std::size_t distinct_elements = 0;
  std::size_t rank_one_elements = 0;
  std::size_t checks = 0;
  std::optional<double> implied_gamma;  // common constant c when degenerate
  std::optional<double> gamma;          // reference γ used for the witness / confirmation
  std::string gamma_source;             // "supplied", "coupled", or "implied"
  std::optional<DegeneracyWitness> witness;
  std::optional<bool> all_rank_one_consistent;  // degenerate: every rank-1 θ found also satisfies it
};

struct DegeneracyOptions {
  double tolerance = 1e-6;
  std::optional<double> gamma;
  std::size_t coupled_samples = 4000;  // to estimate γ for the witness when not supplied
  std::size_t max_elements = 100'000;
  std::size_t max_cross_checks = 2'000'000;
  std::size_t cap = kDefaultCap;
  std::size_t workers = 1;
};

/**
 * Searches the semigroup generated by the atoms for a rank-1 θ with
 * θ A θ' = θ θ' + γ 1 for every atom A and every rank-1 θ' found. All
 * differences θAθ'0 - θθ'0 must be one common constant vector c·1, which then
 * is γ.
 */
inline DegeneracyReport degeneracy_probe(const ModelSpec& spec, std::size_t depth,
                                         const DegeneracyOptions& opt = {}) {
  if (spec.kind != ModelKind::finite_support_iid)
    throw ValidationError("degeneracy_probe needs a finite_support_iid model");
  const auto& atoms = std::get<FiniteSupport>(spec.params).atoms;
  DegeneracyReport rep;
  rep.depth = depth;
  const Semigroup sg = enumerate_semigroup(atoms, depth, opt.max_elements);
  rep.distinct_elements = sg.elements.size();
  if (sg.truncated) {
    rep.reason = "semigroup exceeds " + std::to_string(opt.max_elements) + " elements";
    return rep;
  }
  std::vector<const MaxPlusMatrix*> rank_one;
  for (const auto& e : sg.elements)
    if (is_rank_one(e.matrix)) rank_one.push_back(&e.matrix);
  rep.rank_one_elements = rank_one.size();
  if (rank_one.empty()) {
    rep.reason = "no rank-1 product up to depth " + std::to_string(depth);
    return rep;
  }

  const StateVector zero = StateVector::zeros(spec.dim);
  // θ'0 for every rank-1 θ'
  std::vector<StateVector> tp0;
  for (const auto* tp : rank_one) tp0.push_back(mp_apply(*tp, zero));

  struct Check {
    std::size_t atom, tp;
    StateVector lhs, base;  // θAθ'0, θθ'0
  };
  auto run_checks = [&](const MaxPlusMatrix& theta, std::vector<Check>* keep) {
    bool ok = true;
    std::optional<double> c;
    for (std::size_t a = 0; a < atoms.size(); ++a)
      for (std::size_t t = 0; t < rank_one.size(); ++t) {
        StateVector lhs = mp_apply(theta, mp_apply(atoms[a], tp0[t]));
        StateVector base = mp_apply(theta, tp0[t]);
        ++rep.checks;
        double lo = lhs[0] - base[0], hi = lo;
        for (std::size_t i = 1; i < spec.dim; ++i) {
          lo = std::min(lo, lhs[i] - base[i]);
          hi = std::max(hi, lhs[i] - base[i]);
        }
        if (hi - lo > opt.tolerance) ok = false;
        if (!c) c = lo;
        if (std::abs(lo - *c) > opt.tolerance || std::abs(hi - *c) > opt.tolerance) ok = false;
        if (keep) keep->push_back({a, t, std::move(lhs), std::move(base)});
      }
    return std::pair{ok, *c};
  };

  const MaxPlusMatrix& theta = *rank_one.front();
  std::vector<Check> checks;
  auto [ok, c] = run_checks(theta, &checks);

  if (ok) {
    rep.implied_gamma = c;
    if (opt.gamma && std::abs(*opt.gamma - c) > opt.tolerance) {
      ok = false;  // consistent constant, but not the cycle time supplied
    } else {
      rep.verdict = DegeneracyVerdict::degenerate;
      rep.gamma = opt.gamma ? *opt.gamma : c;
      rep.gamma_source = opt.gamma ? "supplied" : "implied";
      bool consistent = true;
      for (std::size_t k = 1; k < rank_one.size(); ++k) {
        if (rep.checks + atoms.size() * rank_one.size() > opt.max_cross_checks) break;
        auto [ok_k, c_k] = run_checks(*rank_one[k], nullptr);
        consistent = consistent && ok_k && std::abs(c_k - c) <= opt.tolerance;
      }
      rep.all_rank_one_consistent = consistent;
      return rep;
    }
  }

  // Not degenerate: report the triple farthest from θθ'0 + γ1.
  double gamma = 0.0;
  if (opt.gamma) {
    gamma = *opt.gamma;
    rep.gamma_source = "supplied";
  } else {
    gamma = estimate_gamma_coupled(spec, opt.coupled_samples, opt.cap, opt.workers).gamma_hat;
    rep.gamma_source = "coupled";
  }
  rep.gamma = gamma;
  const Check* worst = nullptr;
  double worst_dev = -1.0;
  for (const auto& ch : checks) {
    double dev = 0.0;
    for (std::size_t i = 0; i < spec.dim; ++i)
      dev = std::max(dev, std::abs(ch.lhs[i] - ch.base[i] - gamma));
    if (dev > worst_dev) {
      worst_dev = dev;
      worst = &ch;
    }
  }
  rep.verdict = worst_dev > opt.tolerance ? DegeneracyVerdict::non_degenerate
                                          : DegeneracyVerdict::inconclusive;
  if (rep.verdict == DegeneracyVerdict::inconclusive)
    rep.reason = "identity violations are within tolerance of the reference gamma";
  rep.witness = DegeneracyWitness{theta, worst->atom, *rank_one[worst->tp], worst->lhs,
                                  worst->base.shifted(gamma), worst_dev};
  return rep;
}

}  // namespace mpx
