#pragma once

// JSON and CSV serialization of engine and estimator results.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mpx/engine.hpp"
#include "mpx/matrix_json.hpp"
#include "mpx/models.hpp"
#include "mpx/stats.hpp"

namespace mpx {

using Json = nlohmann::ordered_json;

inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json to_json(const StateVector& x) { return Json(std::vector<double>(x.begin(), x.end())); }

inline Json to_json(const MaxPlusMatrix& a) { return Json(matrix_to_json(a)); }

inline Json to_json(const MixingClass& m) { return {{"label", m.label}, {"statement", m.statement}}; }

inline Json to_json(const GammaEstimate& g) {
  Json j{{"method", to_string(g.method)}, {"gamma_hat", g.gamma_hat}, {"stderr", g.stderr_}};
  if (g.method == GammaMethod::coupled_xi) {
    j["samples"] = g.count;
  } else {
    j["n"] = g.n;
    j["replicas"] = g.count;
    j["window"] = g.window;
    j["gamma_full"] = g.gamma_full;
  }
  return j;
}

inline Json to_json(const LlnGamma& g) {
  return {{"top", to_json(g.top)},
          {"bottom", to_json(g.bottom)},
          {"diff_stderr", g.diff_stderr},
          {"disagree", g.disagree}};
}

inline Json to_json(const SigmaEstimate& s) {
  return {{"sigma_hat", s.sigma_hat},   {"mad", s.mad},
          {"gamma", s.gamma},           {"n", s.n},
          {"replicas", s.replicas},     {"ci", {s.ci_lo, s.ci_hi}},
          {"heuristic_sigma", s.heuristic_sigma}, {"heuristic_note", "naive RMS estimator, heuristic"}};
}

inline Json to_json(const TightnessReport& t) {
  return {{"gamma", t.gamma},       {"replicas", t.replicas}, {"grid", t.grid},
          {"p95", t.p95},           {"exponent", t.exponent}, {"verdict", to_string(t.verdict)}};
}

inline Json to_json(const CltReport& c) {
  Json j{{"n", c.n},
         {"replicas", c.replicas},
         {"gamma_hat", c.gamma_hat},
         {"sigma", to_json(c.sigma)},
         {"ks_distance", c.ks_distance},
         {"ks_distance_alt", c.ks_distance_alt},
         {"ks_two_sample", c.ks_two_sample},
         {"threshold", c.threshold},
         {"verdict", to_string(c.verdict)},
         {"samples", c.samples},
         {"samples_alt", c.samples_alt}};
  if (c.tightness) j["tightness"] = to_json(*c.tightness);
  return j;
}

inline Json to_json(const DegeneracyReport& d) {
  Json j{{"verdict", to_string(d.verdict)},
         {"reason", d.reason},
         {"depth", d.depth},
         {"distinct_elements", d.distinct_elements},
         {"rank_one_elements", d.rank_one_elements},
         {"checks", d.checks}};
  j["implied_gamma"] = d.implied_gamma ? Json(*d.implied_gamma) : Json(nullptr);
  j["gamma"] = d.gamma ? Json(*d.gamma) : Json(nullptr);
  j["gamma_source"] = d.gamma_source;
  if (d.witness) {
    const auto& w = *d.witness;
    j["witness"] = {{"theta", to_json(w.theta)},  {"atom", w.atom},
                    {"theta_prime", to_json(w.theta_prime)}, {"lhs", to_json(w.lhs)},
                    {"rhs", to_json(w.rhs)},      {"deviation", w.deviation}};
  }
  if (d.all_rank_one_consistent) j["all_rank_one_consistent"] = *d.all_rank_one_consistent;
  return j;
}

inline Json to_json(const MlpReport& m) {
  Json levels = Json::array();
  for (const auto& l : m.levels)
    levels.push_back({{"N", l.N}, {"rank_one", l.rank_one}, {"estimate", l.estimate},
                      {"wilson", {l.ci.lo, l.ci.hi}}});
  Json j{{"horizon", m.horizon}, {"trials", m.trials}, {"detected", m.detected}};
  j["first_detected"] = m.first_detected ? Json(*m.first_detected) : Json(nullptr);
  j["levels"] = std::move(levels);
  if (m.exact) {
    const auto& e = *m.exact;
    j["exact"] = {{"searched_depth", e.searched_depth},
                  {"distinct_elements", e.distinct_elements},
                  {"truncated", e.truncated},
                  {"mlp_certain", e.min_rank_one_depth.has_value()},
                  {"min_rank_one_depth",
                   e.min_rank_one_depth ? Json(*e.min_rank_one_depth) : Json(nullptr)}};
  }
  return j;
}

inline Json to_json(const CouplingResult& c) {
  return {{"N", c.N}, {"Y", to_json(c.Y.rep())}, {"R", c.R}, {"Z", c.Z},
          {"partial_norms", c.partial_norms}};
}

inline Json to_json(const Trajectory& t) {
  Json j{{"replica", t.replica}, {"kind", to_string(t.kind)}, {"x0", to_json(t.x0)},
         {"streaming", t.streaming}, {"tops", t.tops}, {"xi", t.xi}};
  if (!t.streaming) {
    Json states = Json::array();
    for (const auto& s : t.states) states.push_back(to_json(s));
    j["states"] = std::move(states);
  }
  j["final_state"] = to_json(t.final_state);
  return j;
}

/// One row of the flat estimator summary.
struct SummaryRow {
  std::string model, method;
  std::size_t n = 0, replicas = 0;
  double estimate = 0.0, stderr_ = 0.0;
  std::string verdict;
};

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "model,method,n,M,estimate,stderr,verdict\n";
  const auto old = out.precision(17);
  for (const auto& r : rows)
    out << r.model << ',' << r.method << ',' << r.n << ',' << r.replicas << ',' << r.estimate << ','
        << r.stderr_ << ',' << r.verdict << '\n';
  out.precision(old);
}

}  // namespace mpx
