#pragma once

/**
 * @file cli.hpp
 * @brief The `mpx` command line: parse a model file, run one engine or
 * estimator command, emit a JSON or CSV report.
 *
 * Exit codes: 0 success, 1 internal error, 2 validation error, 3 coupling cap exceeded.
 */

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpx/engine.hpp"
#include "mpx/error.hpp"
#include "mpx/models.hpp"
#include "mpx/report.hpp"
#include "mpx/stats.hpp"

namespace mpx::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kCapExceeded = 3 };

struct RunConfig {
  std::string command;
  std::string model_path;
  std::size_t n = 1000;
  std::size_t replicas = 100;
  std::size_t depth = 8;
  std::size_t cap = kDefaultCap;
  std::size_t samples = 1000;
  std::size_t replica = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma;
  std::vector<double> x0, x0_alt;
  std::string method = "lln";
  unsigned grid_min = 6, grid_max = 13;
  double threshold = 0.06;
  std::string out;
  std::string format = "json";
  std::size_t parallel = 1;
};

namespace detail {

inline StateVector vector_or(const std::vector<double>& v, std::size_t dim, StateVector fallback) {
  if (v.empty()) return fallback;
  if (v.size() != dim)
    throw DimensionError("initial condition has " + std::to_string(v.size()) +
                         " coordinates, model dim is " + std::to_string(dim));
  return StateVector(v);
}

inline StateVector default_alt_x0(std::size_t dim) {
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = i % 2 == 0 ? 0.5 : -0.5;
  return StateVector(std::move(v));
}

struct Output {
  Json result = Json::object();
  std::vector<SummaryRow> rows;
  std::string raw;  // set when the command emits its own text (trajectory CSV)
};

}  // namespace detail

/// Executes a parsed configuration and returns the serialized report.
inline std::string execute(const RunConfig& cfg) {
  const std::string text = read_file(cfg.model_path);
  ModelSpec spec = parse_model(text);
  if (cfg.seed) spec.seed = *cfg.seed;
  const std::size_t workers = cfg.parallel;
  const std::string& model = cfg.model_path;

  Json flags = Json::object();
  detail::Output o;
  const std::string& c = cfg.command;

  if (c == "validate") {
    const MixingClass mc = mixing_class(spec);
    flags = Json::object();
    o.result = {{"dim", spec.dim}, {"kind", to_string(spec.kind)}, {"mixing", to_json(mc)}};
    o.raw = "dim=" + std::to_string(spec.dim) + "\nkind=" + to_string(spec.kind) +
            "\nmixing=" + mc.label + " (" + mc.statement + ")\n";
  } else if (c == "simulate") {
    flags = {{"n", cfg.n}, {"replica", cfg.replica}, {"x0", cfg.x0}};
    const StateVector x0 = detail::vector_or(cfg.x0, spec.dim, StateVector::zeros(spec.dim));
    const Trajectory t = run_srs(spec, x0, cfg.n, cfg.replica);
    if (cfg.format == "csv") {
      std::ostringstream csv;
      write_trajectory_csv(csv, t);
      o.raw = csv.str();
    }
    o.result = to_json(t);
  } else if (c == "mlp") {
    flags = {{"depth", cfg.depth}, {"replicas", cfg.replicas}};
    const MlpReport r = mlp_probe(spec, cfg.depth, cfg.replicas, workers);
    o.result = to_json(r);
    const double est = r.levels.empty() ? 0.0 : r.levels.back().estimate;
    o.rows.push_back({model, "mlp_probe", cfg.depth, cfg.replicas, est, 0.0,
                      r.detected ? "mlp_detected" : "mlp_not_detected"});
  } else if (c == "couple") {
    flags = {{"replicas", cfg.replicas}, {"cap", cfg.cap}};
    auto results = map_replicas(cfg.replicas, workers,
                                [&](std::size_t r) { return backward_couple(spec, r, cfg.cap); });
    Json arr = Json::array();
    std::vector<double> ns, zs;
    std::size_t n_max = 0;
    for (const auto& res : results) {
      arr.push_back(to_json(res));
      ns.push_back(static_cast<double>(res.N));
      zs.push_back(res.Z);
      n_max = std::max(n_max, res.N);
    }
    o.result = {{"mean_N", mpx::detail::mean_of(ns)}, {"max_N", n_max},
                {"mean_Z", mpx::detail::mean_of(zs)}, {"stderr_Z", mpx::detail::stderr_of(zs)},
                {"samples", std::move(arr)}};
    o.rows.push_back({model, "backward_couple", 0, cfg.replicas, mpx::detail::mean_of(ns),
                      mpx::detail::stderr_of(ns), "ok"});
  } else if (c == "gamma") {
    flags = {{"n", cfg.n}, {"replicas", cfg.replicas}, {"method", cfg.method},
             {"samples", cfg.samples}, {"cap", cfg.cap}};
    if (cfg.method != "lln" && cfg.method != "coupled" && cfg.method != "all")
      throw ValidationError("--method must be lln, coupled or all");
    std::optional<GammaEstimate> primary;
    if (cfg.method == "lln" || cfg.method == "all") {
      const LlnGamma g = estimate_gamma_lln(spec, cfg.n, cfg.replicas, workers);
      o.result["lln"] = to_json(g);
      primary = g.top;
      o.rows.push_back({model, "lln_top", cfg.n, cfg.replicas, g.top.gamma_hat, g.top.stderr_,
                        g.disagree ? "top_bottom_disagree" : "ok"});
      o.rows.push_back({model, "lln_bottom", cfg.n, cfg.replicas, g.bottom.gamma_hat,
                        g.bottom.stderr_, g.disagree ? "top_bottom_disagree" : "ok"});
    }
    if (cfg.method == "coupled" || cfg.method == "all") {
      const GammaEstimate g = estimate_gamma_coupled(spec, cfg.samples, cfg.cap, workers);
      o.result["coupled"] = to_json(g);
      if (!primary) primary = g;
      o.rows.push_back({model, "coupled_xi", 0, cfg.samples, g.gamma_hat, g.stderr_, "ok"});
    }
    o.result["gamma_hat"] = primary->gamma_hat;
    o.result["stderr"] = primary->stderr_;
  } else if (c == "sigma") {
    flags = {{"n", cfg.n}, {"replicas", cfg.replicas}};
    flags["gamma"] = cfg.gamma ? Json(*cfg.gamma) : Json(nullptr);
    double gamma = 0.0;
    std::string source = "supplied";
    if (cfg.gamma) {
      gamma = *cfg.gamma;
    } else {
      gamma = estimate_gamma_lln(spec, cfg.n, cfg.replicas, workers).top.gamma_hat;
      source = "lln";
    }
    const SigmaEstimate s = estimate_sigma_mad(spec, gamma, cfg.n, cfg.replicas, workers);
    o.result = to_json(s);
    o.result["gamma_source"] = source;
    o.rows.push_back({model, "sigma_mad", cfg.n, cfg.replicas, s.sigma_hat,
                      0.5 * (s.ci_hi - s.ci_lo) / 1.96, "ok"});
  } else if (c == "clt") {
    flags = {{"n", cfg.n}, {"replicas", cfg.replicas}, {"cap", cfg.cap}, {"x0", cfg.x0},
             {"x0_alt", cfg.x0_alt}, {"threshold", cfg.threshold}};
    flags["gamma"] = cfg.gamma ? Json(*cfg.gamma) : Json(nullptr);
    CltOptions opt;
    opt.threshold = cfg.threshold;
    opt.cap = cfg.cap;
    opt.gamma = cfg.gamma;
    opt.workers = workers;
    const StateVector x0 = detail::vector_or(cfg.x0, spec.dim, StateVector::zeros(spec.dim));
    const StateVector alt = detail::vector_or(cfg.x0_alt, spec.dim, detail::default_alt_x0(spec.dim));
    const CltReport r = clt_test(spec, cfg.n, cfg.replicas, x0, alt, opt);
    o.result = to_json(r);
    o.rows.push_back({model, "clt_ks", cfg.n, cfg.replicas, r.ks_distance, 0.0, to_string(r.verdict)});
  } else if (c == "degeneracy") {
    flags = {{"depth", cfg.depth}, {"samples", cfg.samples}, {"cap", cfg.cap}};
    flags["gamma"] = cfg.gamma ? Json(*cfg.gamma) : Json(nullptr);
    DegeneracyOptions opt;
    opt.gamma = cfg.gamma;
    opt.coupled_samples = cfg.samples;
    opt.cap = cfg.cap;
    opt.workers = workers;
    const DegeneracyReport r = degeneracy_probe(spec, cfg.depth, opt);
    o.result = to_json(r);
    o.rows.push_back({model, "degeneracy_probe", cfg.depth, 0, r.gamma ? *r.gamma : 0.0, 0.0,
                      to_string(r.verdict)});
  } else if (c == "tightness") {
    flags = {{"replicas", cfg.replicas}, {"grid_min", cfg.grid_min}, {"grid_max", cfg.grid_max}};
    flags["gamma"] = cfg.gamma ? Json(*cfg.gamma) : Json(nullptr);
    if (cfg.grid_min > cfg.grid_max || cfg.grid_max > 40)
      throw ValidationError("grid exponents must satisfy grid-min <= grid-max <= 40");
    const auto grid = power_of_two_grid(cfg.grid_min, cfg.grid_max);
    double gamma = 0.0;
    std::string source = "supplied";
    if (cfg.gamma) {
      gamma = *cfg.gamma;
    } else {
      gamma = estimate_gamma_lln(spec, grid.back(), cfg.replicas, workers).top.gamma_hat;
      source = "lln";
    }
    const TightnessReport r = tightness_probe(spec, gamma, grid, cfg.replicas, workers);
    o.result = to_json(r);
    o.result["gamma_source"] = source;
    o.rows.push_back({model, "tightness_probe", grid.back(), cfg.replicas, r.exponent, 0.0,
                      to_string(r.verdict)});
  } else {
    throw ValidationError("unknown command " + c);
  }

  if (cfg.format == "csv") {
    if (!o.raw.empty() && c != "validate") return o.raw;
    std::ostringstream csv;
    write_summary_csv(csv, o.rows);
    return csv.str();
  }
  if (c == "validate" && cfg.out.empty()) return o.raw;

  Json report;
  report["command"] = c;
  report["config"] = {{"model", cfg.model_path},
                      {"model_hash", "fnv1a64:" + fnv1a64_hex(text)},
                      {"seed", spec.seed},
                      {"flags", std::move(flags)}};
  report["result"] = std::move(o.result);
  return report.dump(2) + "\n";
}

/// Full command-line entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Stochastic recursive sequences of max-plus operators: simulation and estimation"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("model", cfg.model_path, "model file (JSON)")->required();
    sub->add_option("--seed", cfg.seed, "override the model file's master seed");
    sub->add_option("--out,-o", cfg.out, "report path (default: stdout)");
    sub->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--parallel", cfg.parallel, "replica worker threads")->check(CLI::PositiveNumber);
  };
  auto add_n = [&](CLI::App* s) { s->add_option("--n", cfg.n, "steps per replica")->check(CLI::PositiveNumber); };
  auto add_m = [&](CLI::App* s) {
    s->add_option("--replicas,-M", cfg.replicas, "number of replicas")->check(CLI::PositiveNumber);
  };
  auto add_cap = [&](CLI::App* s) {
    s->add_option("--cap", cfg.cap, "coupling step budget")->check(CLI::PositiveNumber);
  };
  auto add_depth = [&](CLI::App* s) {
    s->add_option("--depth", cfg.depth, "product length / word depth")->check(CLI::PositiveNumber);
  };
  auto add_gamma = [&](CLI::App* s) { s->add_option("--gamma", cfg.gamma, "cycle time to center on"); };
  auto add_samples = [&](CLI::App* s) {
    s->add_option("--samples", cfg.samples, "coupling samples")->check(CLI::PositiveNumber);
  };

  struct Cmd {
    const char* name;
    const char* help;
  };
  const Cmd cmds[] = {{"validate", "check a model file and print its mixing class"},
                      {"simulate", "record one trajectory"},
                      {"mlp", "probe the memory loss property"},
                      {"couple", "backward coupling samples"},
                      {"gamma", "estimate the cycle time"},
                      {"sigma", "estimate the CLT scale"},
                      {"clt", "check Gaussian fluctuations"},
                      {"degeneracy", "test the sigma = 0 identity (finite support)"},
                      {"tightness", "percentile growth of centered trajectories"}};
  for (const auto& cmd : cmds) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub);
    const std::string name = cmd.name;
    if (name == "simulate") {
      add_n(sub);
      sub->add_option("--replica", cfg.replica, "replica id");
      sub->add_option("--x0", cfg.x0, "initial condition")->delimiter(',');
    } else if (name == "mlp") {
      add_depth(sub);
      add_m(sub);
    } else if (name == "couple") {
      add_m(sub);
      add_cap(sub);
    } else if (name == "gamma") {
      add_n(sub);
      add_m(sub);
      add_samples(sub);
      add_cap(sub);
      sub->add_option("--method", cfg.method, "lln, coupled or all")
          ->check(CLI::IsMember({"lln", "coupled", "all"}));
    } else if (name == "sigma") {
      add_n(sub);
      add_m(sub);
      add_gamma(sub);
    } else if (name == "clt") {
      add_n(sub);
      add_m(sub);
      add_cap(sub);
      add_gamma(sub);
      sub->add_option("--x0", cfg.x0, "first initial condition")->delimiter(',');
      sub->add_option("--x0-alt", cfg.x0_alt, "second initial condition")->delimiter(',');
      sub->add_option("--threshold", cfg.threshold, "KS distance threshold");
    } else if (name == "degeneracy") {
      add_depth(sub);
      add_gamma(sub);
      add_samples(sub);
      add_cap(sub);
    } else if (name == "tightness") {
      add_m(sub);
      add_gamma(sub);
      sub->add_option("--grid-min", cfg.grid_min, "smallest n = 2^grid-min");
      sub->add_option("--grid-max", cfg.grid_max, "largest n = 2^grid-max");
    }
    sub->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "mpx: " << e.what() << '\n';
    return kValidation;
  }

  try {
    const std::string report = execute(cfg);
    if (cfg.out.empty()) {
      out << report;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw ValidationError("cannot write " + cfg.out);
      f << report;
    }
    return kOk;
  } catch (const CapExceeded& e) {
    err << "mpx: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const ValidationError& e) {
    err << "mpx: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "mpx: internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace mpx::cli
