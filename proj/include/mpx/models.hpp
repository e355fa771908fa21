#pragma once

/**
 * @file models.hpp
 * @brief Stationary random sequences of max-plus operators.
 *
 * Four generator families are supported:
 *  - finite_support_iid: i.i.d. draws from a finite set of matrices;
 *  - entrywise_iid: fixed -inf pattern, each finite entry drawn independently;
 *  - markov_modulated: a stationary finite Markov chain picks the generator;
 *  - example1: the two-part assembly line, whose (3,3) entry carries the
 *    previous assembly time, making the sequence 1-dependent.
 *
 * An OperatorStream realizes A_0, A_1, ... (forward) or A_0, A_-1, A_-2, ...
 * (backward) under the stationary law. Streams are pure functions of
 * (model, master seed, StreamKey).
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mpx/algebra.hpp"
#include "mpx/matrix_json.hpp"
#include "mpx/random.hpp"

namespace mpx {

// ---------------------------------------------------------------------------
// Distributions

struct Distribution {
  enum class Kind { uniform, normal };
  Kind kind = Kind::uniform;
  double p1 = 0.0;  // a or mu
  double p2 = 0.0;  // b or s

  static Distribution uniform(double a, double b) {
    if (!(std::isfinite(a) && std::isfinite(b)) || b < a)
      throw ValidationError("uniform(a,b) requires finite a <= b");
    return {Kind::uniform, a, b};
  }
  static Distribution normal(double mu, double s) {
    if (!(std::isfinite(mu) && std::isfinite(s)) || s < 0)
      throw ValidationError("normal(mu,s) requires finite mu and s >= 0");
    return {Kind::normal, mu, s};
  }
  static Distribution constant(double c) { return uniform(c, c); }

  double sample(Rng& rng) const {
    return kind == Kind::uniform ? rng.uniform(p1, p2) : rng.normal(p1, p2);
  }

  double mean() const { return kind == Kind::uniform ? 0.5 * (p1 + p2) : p1; }

  bool nonnegative_support() const {
    return kind == Kind::uniform ? p1 >= 0.0 : (p2 == 0.0 && p1 >= 0.0);
  }

  /// Same law shifted by c.
  Distribution shifted(double c) const { return {kind, p1 + c, kind == Kind::uniform ? p2 + c : p2}; }
};

// ---------------------------------------------------------------------------
// Model specification

enum class ModelKind { finite_support_iid, entrywise_iid, markov_modulated, example1 };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::finite_support_iid: return "finite_support_iid";
    case ModelKind::entrywise_iid: return "entrywise_iid";
    case ModelKind::markov_modulated: return "markov_modulated";
    case ModelKind::example1: return "example1";
  }
  return "unknown";
}

struct FiniteSupport {
  std::vector<MaxPlusMatrix> atoms;
  std::vector<double> probs;
  std::vector<double> cumulative;
};

struct Entrywise {
  std::size_t dim = 0;
  std::vector<std::optional<Distribution>> entries;  // row-major, nullopt = -inf
};

using RegimeGenerator = std::variant<FiniteSupport, Entrywise>;

struct MarkovModulated {
  std::vector<std::vector<double>> transition;
  std::vector<RegimeGenerator> regimes;
  std::vector<double> stationary;
  std::vector<std::vector<double>> reversed;  // P̂_ij = π_j P_ji / π_i
  // Cumulative rows used for sampling.
  std::vector<double> stationary_cdf;
  std::vector<std::vector<double>> transition_cdf, reversed_cdf;
};

struct Example1Params {
  Distribution a1, a2, a3, t1, t2;
};

struct ModelSpec {
  std::size_t dim = 0;
  ModelKind kind = ModelKind::finite_support_iid;
  std::uint64_t seed = 0;
  std::variant<FiniteSupport, Entrywise, MarkovModulated, Example1Params> params;
};

namespace detail {

inline std::vector<double> cumulative_of(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  std::partial_sum(p.begin(), p.end(), c.begin());
  c.back() = 1.0;
  return c;
}

inline FiniteSupport make_finite_support(std::vector<MaxPlusMatrix> atoms, std::vector<double> probs,
                                         std::size_t dim) {
  if (atoms.empty()) throw ValidationError("finite support needs at least one atom");
  if (atoms.size() != probs.size()) throw ValidationError("one probability per atom required");
  double total = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (atoms[k].dim() != dim)
      throw DimensionError("atom " + std::to_string(k) + " has dim " +
                           std::to_string(atoms[k].dim()) + ", model dim is " + std::to_string(dim));
    if (!(probs[k] > 0.0) || !std::isfinite(probs[k]))
      throw ValidationError("atom probabilities must be > 0");
    total += probs[k];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum ≠ 1 (sum = " << total << ")";
    throw ValidationError(msg.str());
  }
  FiniteSupport fs{std::move(atoms), std::move(probs), {}};
  fs.cumulative = cumulative_of(fs.probs);
  return fs;
}

inline Entrywise make_entrywise(std::size_t dim, std::vector<std::optional<Distribution>> entries) {
  if (dim == 0) throw DimensionError("dim must be >= 1");
  if (entries.size() != dim * dim) throw DimensionError("entrywise pattern must be dim x dim");
  for (std::size_t i = 0; i < dim; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < dim; ++j) any = any || entries[i * dim + j].has_value();
    if (!any) throw ValidationError("support pattern has a -inf row (row " + std::to_string(i) + ")");
  }
  return Entrywise{dim, std::move(entries)};
}

inline bool strongly_connected(const std::vector<std::vector<double>>& p) {
  const std::size_t r = p.size();
  auto reach_all = [&](bool transpose) {
    std::vector<char> seen(r, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < r; ++v) {
        double w = transpose ? p[v][u] : p[u][v];
        if (w > 0.0 && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach_all(false) && reach_all(true);
}

}  // namespace detail

/// Stationary law of an irreducible stochastic matrix, by power iteration on
/// the lazy chain (P + I)/2, which has the same fixed point and no periodicity.
inline std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& p) {
  const std::size_t r = p.size();
  std::vector<double> pi(r, 1.0 / static_cast<double>(r)), next(r);
  for (int it = 0; it < 100000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) next[j] += pi[i] * 0.5 * (p[i][j] + (i == j ? 1.0 : 0.0));
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double diff = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      next[j] /= total;
      diff = std::max(diff, std::abs(next[j] - pi[j]));
    }
    pi.swap(next);
    if (diff < 1e-13) return pi;
  }
  throw ValidationError("stationary distribution did not converge in 1e5 iterations");
}

inline std::vector<std::vector<double>> reversed_kernel(const std::vector<std::vector<double>>& p,
                                                        const std::vector<double>& pi) {
  const std::size_t r = p.size();
  std::vector<std::vector<double>> q(r, std::vector<double>(r, 0.0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) q[i][j] = pi[j] * p[j][i] / pi[i];
  return q;
}

/// Period of an irreducible chain: gcd of level differences along edges of a BFS tree.
inline std::size_t chain_period(const std::vector<std::vector<double>>& p) {
  const std::size_t r = p.size();
  std::vector<std::ptrdiff_t> level(r, -1);
  std::vector<std::size_t> queue{0};
  level[0] = 0;
  std::size_t g = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t u = queue[head];
    for (std::size_t v = 0; v < r; ++v) {
      if (!(p[u][v] > 0.0)) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      } else {
        g = std::gcd(g, static_cast<std::size_t>(std::abs(level[u] + 1 - level[v])));
      }
    }
  }
  return g;
}

inline ModelSpec make_finite_support_model(std::vector<MaxPlusMatrix> atoms, std::vector<double> probs,
                                           std::uint64_t seed = 0) {
  if (atoms.empty()) throw ValidationError("finite support needs at least one atom");
  const std::size_t d = atoms.front().dim();
  return ModelSpec{d, ModelKind::finite_support_iid, seed,
                   detail::make_finite_support(std::move(atoms), std::move(probs), d)};
}

inline ModelSpec make_entrywise_model(std::size_t dim, std::vector<std::optional<Distribution>> entries,
                                      std::uint64_t seed = 0) {
  return ModelSpec{dim, ModelKind::entrywise_iid, seed,
                   detail::make_entrywise(dim, std::move(entries))};
}

inline ModelSpec make_markov_model(std::size_t dim, std::vector<std::vector<double>> transition,
                                   std::vector<RegimeGenerator> regimes, std::uint64_t seed = 0) {
  const std::size_t r = transition.size();
  if (r == 0) throw ValidationError("markov_modulated needs at least one regime");
  if (regimes.size() != r)
    throw ValidationError("transition matrix is " + std::to_string(r) + "x" + std::to_string(r) +
                          " but " + std::to_string(regimes.size()) + " regimes given");
  for (const auto& row : transition) {
    if (row.size() != r) throw ValidationError("transition matrix must be square");
    double s = 0.0;
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ValidationError("transition probabilities must be >= 0");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) throw ValidationError("transition matrix is not row-stochastic");
  }
  if (!detail::strongly_connected(transition))
    throw ValidationError("modulating chain is not irreducible");
  for (const auto& g : regimes) {
    std::size_t gd = std::holds_alternative<FiniteSupport>(g)
                         ? std::get<FiniteSupport>(g).atoms.front().dim()
                         : std::get<Entrywise>(g).dim;
    if (gd != dim) throw DimensionError("regime generator dim does not match model dim");
  }
  MarkovModulated mm{std::move(transition), std::move(regimes), {}, {}, {}, {}, {}};
  mm.stationary = stationary_distribution(mm.transition);
  mm.reversed = reversed_kernel(mm.transition, mm.stationary);
  mm.stationary_cdf = detail::cumulative_of(mm.stationary);
  for (std::size_t i = 0; i < r; ++i) {
    mm.transition_cdf.push_back(detail::cumulative_of(mm.transition[i]));
    mm.reversed_cdf.push_back(detail::cumulative_of(mm.reversed[i]));
  }
  return ModelSpec{dim, ModelKind::markov_modulated, seed, std::move(mm)};
}

inline ModelSpec make_example1_model(Example1Params p, std::uint64_t seed = 0) {
  for (const Distribution* d : {&p.a1, &p.a2, &p.a3, &p.t1, &p.t2})
    if (!d->nonnegative_support())
      throw ValidationError("example1 durations need a nonnegative law (uniform(a,b) with a >= 0)");
  return ModelSpec{3, ModelKind::example1, seed, std::move(p)};
}

/**
 * The assembly-line operator:
 *
 *   ( a1       -inf     a3              )
 *   ( -inf     a2       a3              )
 *   ( a1+t1    a2+t2    max(t1,t2)+a3'  )
 *
 * where a3' is the previous step's assembly time.
 */
inline MaxPlusMatrix example1_matrix(double a1, double a2, double a3_prev, double a3, double t1,
                                     double t2) {
  for (double v : {a1, a2, a3_prev, a3, t1, t2})
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("example1: durations must be >= 0");
  return MaxPlusMatrix(3, {a1, kNegInf, a3,                          //
                           kNegInf, a2, a3,                          //
                           a1 + t1, a2 + t2, std::max(t1, t2) + a3_prev});
}

/// Translate every finite entry of every generator by c (A -> A + c).
inline ModelSpec shifted_model(const ModelSpec& spec, double c) {
  ModelSpec out = spec;
  auto shift_regime = [c](auto& g) {
    using G = std::decay_t<decltype(g)>;
    if constexpr (std::is_same_v<G, FiniteSupport>) {
      for (auto& a : g.atoms) a = a.shifted(c);
    } else if constexpr (std::is_same_v<G, Entrywise>) {
      for (auto& e : g.entries)
        if (e) *e = e->shifted(c);
    }
  };
  std::visit(
      [&](auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, MarkovModulated>) {
          for (auto& g : p.regimes) std::visit(shift_regime, g);
        } else if constexpr (std::is_same_v<P, Example1Params>) {
          throw ValidationError("shifted_model: example1 is parameterized by durations");
        } else {
          shift_regime(p);
        }
      },
      out.params);
  return out;
}

// ---------------------------------------------------------------------------
// Operator streams

/// The values behind the most recent example1 matrix, for bookkeeping checks.
struct Example1Draw {
  double a1 = 0, a2 = 0, a3 = 0, a3_prev = 0, t1 = 0, t2 = 0;
};

class OperatorStream {
 public:
  /// The stream keeps a pointer to `spec`, which must outlive it.
  OperatorStream(const ModelSpec& spec, StreamKey key)
      : spec_(&spec), key_(key), rng_(derive_seed(spec.seed, key)) {}

  OperatorStream(const ModelSpec& spec, std::uint64_t replica, Direction dir = Direction::forward)
      : OperatorStream(spec, StreamKey{replica, dir, 0}) {}

  const ModelSpec& spec() const noexcept { return *spec_; }
  Direction direction() const noexcept { return key_.direction; }
  std::uint64_t replica() const noexcept { return key_.replica; }

  /// Number of operators drawn so far.
  std::size_t position() const noexcept { return position_; }

  /// Atom index of the last finite-support draw, or -1.
  std::ptrdiff_t last_atom() const noexcept { return last_atom_; }
  std::ptrdiff_t regime() const noexcept { return regime_; }
  const Example1Draw& last_example1() const noexcept { return ex1_; }

  /// Next operator: A_n for forward streams, A_{-n} for backward streams.
  MaxPlusMatrix next() {
    MaxPlusMatrix out = std::visit([this](const auto& p) { return draw(p); }, spec_->params);
    ++position_;
    return out;
  }

 private:
  MaxPlusMatrix draw_regime(const FiniteSupport& fs) {
    const std::size_t k = rng_.categorical(fs.cumulative);
    last_atom_ = static_cast<std::ptrdiff_t>(k);
    return fs.atoms[k];
  }

  MaxPlusMatrix draw_regime(const Entrywise& ew) {
    std::vector<double> e(ew.dim * ew.dim, kNegInf);
    for (std::size_t k = 0; k < e.size(); ++k)
      if (ew.entries[k]) e[k] = ew.entries[k]->sample(rng_);
    return MaxPlusMatrix(ew.dim, std::move(e));
  }

  MaxPlusMatrix draw(const FiniteSupport& fs) { return draw_regime(fs); }
  MaxPlusMatrix draw(const Entrywise& ew) { return draw_regime(ew); }

  MaxPlusMatrix draw(const MarkovModulated& mm) {
    if (regime_ < 0) {
      regime_ = static_cast<std::ptrdiff_t>(rng_.categorical(mm.stationary_cdf));
    } else {
      const auto& kernel = key_.direction == Direction::forward ? mm.transition_cdf : mm.reversed_cdf;
      regime_ = static_cast<std::ptrdiff_t>(
          rng_.categorical(kernel[static_cast<std::size_t>(regime_)]));
    }
    return std::visit([this](const auto& g) { return draw_regime(g); },
                      mm.regimes[static_cast<std::size_t>(regime_)]);
  }

  // Forward: a3_prev of step n is the a3 drawn at step n-1.
  // Backward: the a3 of A_{-n} is the a3_prev drawn for A_{-n+1}.
  MaxPlusMatrix draw(const Example1Params& p) {
    Example1Draw d;
    if (key_.direction == Direction::forward) {
      d.a3_prev = carry_ ? *carry_ : p.a3.sample(rng_);
      d.a1 = p.a1.sample(rng_);
      d.a2 = p.a2.sample(rng_);
      d.a3 = p.a3.sample(rng_);
      d.t1 = p.t1.sample(rng_);
      d.t2 = p.t2.sample(rng_);
      carry_ = d.a3;
    } else {
      d.a3 = carry_ ? *carry_ : p.a3.sample(rng_);
      d.a1 = p.a1.sample(rng_);
      d.a2 = p.a2.sample(rng_);
      d.t1 = p.t1.sample(rng_);
      d.t2 = p.t2.sample(rng_);
      d.a3_prev = p.a3.sample(rng_);
      carry_ = d.a3_prev;
    }
    ex1_ = d;
    return example1_matrix(d.a1, d.a2, d.a3_prev, d.a3, d.t1, d.t2);
  }

  const ModelSpec* spec_;
  StreamKey key_;
  Rng rng_;
  std::size_t position_ = 0;
  std::ptrdiff_t last_atom_ = -1;
  std::ptrdiff_t regime_ = -1;
  std::optional<double> carry_;
  Example1Draw ex1_;
};

// ---------------------------------------------------------------------------
// Mixing classification

struct MixingClass {
  std::string label;      // "iid", "1-dependent", "geometric", "unclassified"
  std::string statement;  // human-readable claim about phi_n
};

inline MixingClass mixing_class(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::finite_support_iid:
    case ModelKind::entrywise_iid:
      return {"iid", "phi_n=0 for n>=1 (mixing condition holds if A_1 0 is in L^2)"};
    case ModelKind::example1:
      return {"1-dependent", "1-dependent: phi_n=0 for n>=2"};
    case ModelKind::markov_modulated: {
      const auto& mm = std::get<MarkovModulated>(spec.params);
      if (!detail::strongly_connected(mm.transition))
        return {"unclassified", "modulating chain is reducible"};
      if (chain_period(mm.transition) != 1)
        return {"unclassified", "modulating chain is periodic"};
      return {"geometric", "geometric phi-mixing (uniformly ergodic finite modulating chain)"};
    }
  }
  return {"unclassified", ""};
}

// ---------------------------------------------------------------------------
// Model files

namespace detail {

inline Distribution distribution_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Distribution::constant(j.get<double>());
  if (!j.is_object() || j.size() != 1)
    throw ValidationError(R"(distribution must be {"uniform":[a,b]} or {"normal":[mu,s]})");
  auto pair_of = [](const nlohmann::json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ValidationError("distribution parameters must be a pair of numbers");
    return std::pair{v[0].get<double>(), v[1].get<double>()};
  };
  if (j.contains("uniform")) {
    auto [a, b] = pair_of(j["uniform"]);
    return Distribution::uniform(a, b);
  }
  if (j.contains("normal")) {
    auto [mu, s] = pair_of(j["normal"]);
    return Distribution::normal(mu, s);
  }
  throw ValidationError("unknown distribution: " + j.dump());
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ValidationError(std::string(where) + ": missing field \"" + key + "\"");
  return obj.at(key);
}

inline FiniteSupport finite_support_from_json(const nlohmann::json& params, std::size_t dim) {
  const auto& atoms = require(params, "atoms", "finite_support_iid params");
  if (!atoms.is_array()) throw ValidationError("\"atoms\" must be an array");
  std::vector<MaxPlusMatrix> mats;
  std::vector<double> probs;
  for (const auto& a : atoms) {
    mats.push_back(matrix_from_json(require(a, "matrix", "atom")));
    const auto& p = require(a, "prob", "atom");
    if (!p.is_number()) throw ValidationError("atom \"prob\" must be a number");
    probs.push_back(p.get<double>());
  }
  return make_finite_support(std::move(mats), std::move(probs), dim);
}

inline Entrywise entrywise_from_json(const nlohmann::json& params, std::size_t dim) {
  const auto& rows = require(params, "entries", "entrywise_iid params");
  if (!rows.is_array() || rows.size() != dim)
    throw DimensionError("\"entries\" must have dim rows");
  std::vector<std::optional<Distribution>> e;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != dim) throw DimensionError("\"entries\" rows must have dim entries");
    for (const auto& v : row) {
      if (v.is_string()) {
        if (v.get<std::string>() != "-inf") throw ValidationError("entry strings must be \"-inf\"");
        e.emplace_back(std::nullopt);
      } else {
        e.emplace_back(distribution_from_json(v));
      }
    }
  }
  return make_entrywise(dim, std::move(e));
}

inline RegimeGenerator regime_from_json(const nlohmann::json& j, std::size_t dim) {
  const auto kind = require(j, "kind", "regime").get<std::string>();
  const auto& params = require(j, "params", "regime");
  if (kind == "finite_support_iid") return finite_support_from_json(params, dim);
  if (kind == "entrywise_iid") return entrywise_from_json(params, dim);
  throw ValidationError("regime kind must be finite_support_iid or entrywise_iid, got " + kind);
}

}  // namespace detail

/// Parses and validates a model document.
inline ModelSpec parse_model(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("model is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("model document must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (key != "dim" && key != "kind" && key != "seed" && key != "params")
      throw ValidationError("unknown model field \"" + key + "\"");

  const auto& jdim = detail::require(doc, "dim", "model");
  if (!jdim.is_number_unsigned() || jdim.get<std::size_t>() == 0)
    throw ValidationError("\"dim\" must be a positive integer");
  const std::size_t dim = jdim.get<std::size_t>();

  const auto& jkind = detail::require(doc, "kind", "model");
  if (!jkind.is_string()) throw ValidationError("\"kind\" must be a string");
  const std::string kind = jkind.get<std::string>();

  std::uint64_t seed = 0;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ValidationError("\"seed\" must be a nonnegative integer");
    seed = doc["seed"].get<std::uint64_t>();
  }
  const auto& params = detail::require(doc, "params", "model");

  ModelSpec spec;
  if (kind == "finite_support_iid") {
    spec = ModelSpec{dim, ModelKind::finite_support_iid, seed, detail::finite_support_from_json(params, dim)};
  } else if (kind == "entrywise_iid") {
    spec = ModelSpec{dim, ModelKind::entrywise_iid, seed, detail::entrywise_from_json(params, dim)};
  } else if (kind == "markov_modulated") {
    const auto& jt = detail::require(params, "transition", "markov_modulated params");
    const auto& jr = detail::require(params, "regimes", "markov_modulated params");
    if (!jt.is_array() || !jr.is_array()) throw ValidationError("transition and regimes must be arrays");
    std::vector<std::vector<double>> p;
    for (const auto& row : jt) {
      if (!row.is_array()) throw ValidationError("transition rows must be arrays");
      std::vector<double> r;
      for (const auto& v : row) {
        if (!v.is_number()) throw ValidationError("transition entries must be numbers");
        r.push_back(v.get<double>());
      }
      p.push_back(std::move(r));
    }
    std::vector<RegimeGenerator> regimes;
    for (const auto& g : jr) regimes.push_back(detail::regime_from_json(g, dim));
    spec = make_markov_model(dim, std::move(p), std::move(regimes), seed);
  } else if (kind == "example1") {
    if (dim != 3) throw DimensionError("example1 models have dim 3");
    auto d = [&](const char* name) {
      return detail::distribution_from_json(detail::require(params, name, "example1 params"));
    };
    spec = make_example1_model({d("a1"), d("a2"), d("a3"), d("t1"), d("t2")}, seed);
  } else {
    throw ValidationError("unknown model kind \"" + kind + "\"");
  }
  return spec;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline ModelSpec load_model(const std::string& path) { return parse_model(read_file(path)); }

}  // namespace mpx
