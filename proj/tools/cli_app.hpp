// Copyright 2026 The rlr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RLR_TOOLS_CLI_APP_HPP_
#define RLR_TOOLS_CLI_APP_HPP_

// Command-line front end. Subcommands:
//
//   solve         recover one random instance
//   phase         rank brackets (r_min, r_max) at given undersampling ratios
//   bench         residual curves of several algorithms on shared instances
//   theory        guarantee constants from RIC values
//   ric-estimate  sampled lower bound on a restricted isometry constant
//
// Every flag can also come from a JSON file given with --config: keys are
// flag names without the leading dashes ("inv-rho" or "inv_rho"), either at
// top level or nested under the subcommand name. Flags on the command line
// win over file values.
//
// Exit codes: 0 success, 1 numerical backend failure, 2 bad configuration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlr/rlr.hpp"

namespace rlr::cli {

struct ProblemFlags {
  std::string sensing = "gaussian";
  std::optional<Index> m, n;
  Index r = 0;
  std::optional<double> delta;
  std::optional<Index> p;
  std::optional<double> inv_rho;
  std::string scale = "normalized";
};

struct SolverFlags {
  std::optional<std::string> beta_rule;
  double kappa1 = 0.1;
  double kappa2 = 1.0;
  std::optional<Index> max_iters;
  std::optional<double> tol;
  Index warm_start = 0;
  Index stall_window = 50;
  double stall_tol = 1e-14;
  std::string subspace = "tangent";
  bool full_svd = false;
};

struct Options {
  // global
  std::uint64_t seed = 0;
  std::string output_dir = "rlr_out";
  std::string format = "csv";
  int threads = 0;
  std::string config;
  // solve / phase / bench
  ProblemFlags problem;
  SolverFlags solver;
  std::string alg = "rgrad";
  std::vector<std::string> algs;
  std::optional<std::uint64_t> ground_truth_seed;
  bool dump_matrices = false;
  // phase
  std::vector<double> deltas;
  Index trials = 10;
  Index r_cap = 0;
  Index r_start = 0;
  std::string preset;
  // theory
  double r2r = 0.0, r3r = 0.0;
  double sigma_min = 1.0, sigma_max = 1.0, x_frob = 1.0;
  std::optional<double> current_error;
  std::string theory_alg = "both";
  bool ric_from_estimate = false;
  // ric-estimate / theory estimate
  Index ric_trials = 1000;
};

namespace detail {

inline std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

inline std::vector<std::string> json_inputs(const Json& v, const std::string& key) {
  std::vector<std::string> out;
  auto scalar = [&](const Json& x) {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_boolean()) return std::string(x.get<bool>() ? "true" : "false");
    if (x.is_number_integer() || x.is_number_unsigned()) return x.dump();
    if (x.is_number_float()) return format_number(x.get<double>());
    throw ConfigError(key, "unsupported value " + x.dump());
  };
  if (v.is_array()) {
    for (const Json& x : v) out.push_back(scalar(x));
  } else {
    out.push_back(scalar(v));
  }
  return out;
}

inline void apply_config_entry(CLI::App& app, CLI::App* sub, const std::string& raw_key,
                               const Json& value) {
  const std::string key = normalize_key(raw_key);
  CLI::Option* opt = nullptr;
  if (sub) opt = sub->get_option_no_throw("--" + key);
  if (!opt) opt = app.get_option_no_throw("--" + key);
  if (!opt || key == "config") throw ConfigError(key, "unknown configuration key");
  if (opt->count() > 0) return;  // the command line wins
  try {
    for (const std::string& s : json_inputs(value, key)) opt->add_result(s);
    opt->run_callback();
  } catch (const CLI::Error& e) {
    throw ConfigError(key, e.what());
  }
}

inline void apply_config_file(CLI::App& app, CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  for (auto& [k, v] : j.items()) {
    if (v.is_object()) {
      CLI::App* named = nullptr;
      for (CLI::App* s : app.get_subcommands({})) {
        if (s->get_name() == k) named = s;
      }
      if (!named) throw ConfigError(k, "unknown subcommand section");
      if (named != sub) continue;  // section for another subcommand
      for (auto& [k2, v2] : v.items()) apply_config_entry(app, sub, k2, v2);
    } else {
      apply_config_entry(app, sub, k, v);
    }
  }
}

inline Algorithm algorithm_or_throw(const std::string& s, const char* field) {
  auto a = parse_algorithm(s);
  if (!a) throw ConfigError(field, "unknown algorithm '" + s + "'");
  return *a;
}

inline SensingKind sensing_or_throw(const std::string& s) {
  auto k = parse_sensing(s);
  if (!k) throw ConfigError("sensing", "must be gaussian or entry, got '" + s + "'");
  return *k;
}

inline ProblemSpec problem_spec(const Options& o, Index default_dim) {
  ProblemSpec spec;
  spec.sensing = sensing_or_throw(o.problem.sensing);
  spec.m = o.problem.m.value_or(default_dim);
  spec.n = o.problem.n.value_or(default_dim);
  spec.r = o.problem.r;
  spec.delta = o.problem.delta;
  spec.p = o.problem.p;
  spec.inv_rho = o.problem.inv_rho;
  if (o.problem.scale != "normalized" && o.problem.scale != "raw") {
    throw ConfigError("scale", "must be normalized or raw");
  }
  spec.normalized = o.problem.scale == "normalized";
  spec.seed = o.seed;
  if (spec.r < 1) throw ConfigError("r", "must be >= 1");
  const int given = int(spec.delta.has_value()) + int(spec.p.has_value()) +
                    int(spec.inv_rho.has_value());
  if (given != 1) throw ConfigError("delta", "give exactly one of --delta, --p, --inv-rho");
  spec.validate();
  return spec;
}

inline SolverConfig solver_config(const Options& o, Algorithm alg, Index r) {
  SolverConfig c;
  c.algorithm = alg;
  c.rank = r;
  if (o.solver.beta_rule) {
    auto b = parse_beta_rule(*o.solver.beta_rule);
    if (!b) throw ConfigError("beta-rule", "unknown rule '" + *o.solver.beta_rule + "'");
    c.beta_rule = *b;
  }
  c.kappa1 = o.solver.kappa1;
  c.kappa2 = o.solver.kappa2;
  if (o.solver.max_iters) c.max_iters = *o.solver.max_iters;
  if (o.solver.tol) c.rel_residual_tol = *o.solver.tol;
  c.warm_start_niht_iters = o.solver.warm_start;
  c.stall_window = o.solver.stall_window;
  c.stall_tol = o.solver.stall_tol;
  auto sub = parse_subspace(o.solver.subspace);
  if (!sub) throw ConfigError("subspace", "must be tangent, column or row");
  c.subspace = *sub;
  c.full_svd_retraction = o.solver.full_svd;
  c.seed = o.seed;
  try {
    c.validate();
  } catch (const ConfigError& e) {
    // Report flag spellings rather than struct fields.
    std::string f = e.field();
    std::replace(f.begin(), f.end(), '_', '-');
    if (f == "rel-residual-tol") f = "tol";
    if (f == "warm-start-niht-iters") f = "warm-start";
    if (f == "rank") f = "r";
    if (f == "full-svd-retraction") f = "full-svd";
    throw ConfigError(f, e.what());
  }
  return c;
}

inline std::filesystem::path output_dir(const Options& o) {
  std::filesystem::path dir(o.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("output-dir", "cannot create " + o.output_dir);
  }
  return dir;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("output-dir", "cannot write " + p.string());
  return f;
}

inline void write_matrix_csv(const std::filesystem::path& p, const Matrix& M) {
  std::ofstream f = open_out(p);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) f << ',';
      f << format_number(M(i, j));
    }
    f << '\n';
  }
}

inline int run_solve(const Options& o, std::ostream& out) {
  const Algorithm alg = algorithm_or_throw(o.alg, "alg");
  ProblemSpec spec = problem_spec(o, 80);
  spec.truth_seed = o.ground_truth_seed;
  SolverConfig cfg = solver_config(o, alg, spec.r);
  if (cfg.rank > std::min(spec.m, spec.n)) throw ConfigError("r", "exceeds min(m, n)");
  if (o.format != "csv" && o.format != "jsonl" && o.format != "json") {
    throw ConfigError("format", "must be csv, jsonl or json");
  }
  const Problem prob = generate_problem(spec);
  const bool truth = o.ground_truth_seed.has_value();
  const SolveResult res = solve(prob.op, prob.y, cfg, truth ? &prob.X : nullptr);

  const auto dir = output_dir(o);
  const Index p = spec.measurements();
  Json summary{{"algorithm", std::string(to_string(alg))},
               {"status", std::string(to_string(res.trace.status))},
               {"iterations", res.trace.iterations()},
               {"rel_residual", res.trace.final_rel_residual()},
               {"applications", res.trace.applications()},
               {"m", spec.m},
               {"n", spec.n},
               {"r", spec.r},
               {"p", p},
               {"delta", undersampling_ratio(spec.m, spec.n, p)},
               {"rho", oversampling_ratio(spec.m, spec.n, spec.r, p)},
               {"seed", o.seed}};
  std::visit([&](const auto& op) { summary["operator"] = to_json(op.descriptor()); }, prob.op);
  if (truth) {
    summary["ground_truth_seed"] = *o.ground_truth_seed;
    summary["rel_error"] = relative_frob_error(res.X, prob.X);
  }
  if (o.format == "csv") {
    std::ofstream f = open_out(dir / "trace.csv");
    write_trace_csv(f, res.trace);
  } else if (o.format == "jsonl") {
    std::ofstream f = open_out(dir / "trace.jsonl");
    write_trace_jsonl(f, res.trace);
  } else {
    Json records = Json::array();
    for (const auto& rec : res.trace.records) records.push_back(to_json(rec));
    summary["trace"] = records;
  }
  {
    std::ofstream f = open_out(dir / "summary.json");
    f << summary.dump(2) << '\n';
  }
  if (o.dump_matrices) {
    write_matrix_csv(dir / "X_hat.csv", res.X);
    write_matrix_csv(dir / "X.csv", prob.X);
  }

  out << "status: " << to_string(res.trace.status) << '\n'
      << "iterations: " << res.trace.iterations() << '\n'
      << "rel_residual: " << format_number(res.trace.final_rel_residual()) << '\n';
  if (truth) out << "rel_error: " << format_number(relative_frob_error(res.X, prob.X)) << '\n';
  return 0;
}

inline std::vector<Algorithm> algorithm_list(const Options& o,
                                             std::vector<Algorithm> fallback) {
  if (o.algs.empty()) return fallback;
  std::vector<Algorithm> out;
  for (const std::string& s : o.algs) out.push_back(algorithm_or_throw(s, "alg"));
  return out;
}

inline int run_phase(const Options& o, std::ostream& out) {
  const SensingKind kind = sensing_or_throw(o.problem.sensing);
  Index dim = kind == SensingKind::Gaussian ? 80 : 800;
  if (o.preset == "desk") dim = kind == SensingKind::Gaussian ? 40 : 400;
  else if (!o.preset.empty() && o.preset != "full") {
    throw ConfigError("preset", "must be full or desk");
  }
  if (o.trials < 1) throw ConfigError("trials", "must be >= 1");
  const std::vector<double> deltas = o.deltas.empty() ? default_delta_grid() : o.deltas;
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 1.0)) throw ConfigError("delta", "values must lie in (0, 1]");
  }
  const auto algs = algorithm_list(
      o, {Algorithm::RGrad, Algorithm::RCG, Algorithm::RCGRestarted});
  BracketOptions base;
  base.m = o.problem.m.value_or(dim);
  base.n = o.problem.n.value_or(dim);
  base.sensing = kind;
  base.trials = o.trials;
  base.r_cap = o.r_cap;
  base.r_start = o.r_start;
  base.base_seed = o.seed;
  base.threads = o.threads;
  if (base.m < 1 || base.n < 1) throw ConfigError("m", "dimensions must be positive");
  if (o.r_cap > std::min(base.m, base.n)) throw ConfigError("r-cap", "exceeds min(m, n)");

  const auto dir = output_dir(o);
  std::ofstream table = open_out(dir / "phase.csv");
  std::ofstream cells = open_out(dir / "cells.jsonl");
  write_phase_csv_header(table);
  write_phase_csv_header(out);
  for (Algorithm alg : algs) {
    SolverConfig cfg = phase_solver_config(alg);
    SolverConfig user = solver_config(o, alg, 1);
    cfg.kappa1 = user.kappa1;
    cfg.kappa2 = user.kappa2;
    cfg.beta_rule = user.beta_rule;
    cfg.subspace = user.subspace;
    if (o.solver.max_iters) cfg.max_iters = *o.solver.max_iters;
    if (o.solver.tol) cfg.rel_residual_tol = *o.solver.tol;
    for (double d : deltas) {
      BracketOptions b = base;
      b.delta = d;
      b.algorithm_label = std::string(to_string(alg));
      PhaseRow row = bracket_rank(b, solver_runner(cfg));
      write_phase_csv_row(table, row);
      write_phase_csv_row(out, row);
      write_cells_jsonl(cells, row);
      out.flush();
    }
  }
  return 0;
}

inline int run_bench(const Options& o, std::ostream& out) {
  ProblemFlags pf = o.problem;
  Index dim = 80;
  if (o.preset == "entry-desk") {
    pf.sensing = "entry";
    dim = 2000;
    if (pf.r == 0) pf.r = 50;
  } else if (o.preset == "entry-full") {
    pf.sensing = "entry";
    dim = 8000;
    if (pf.r == 0) pf.r = 100;
  } else if (o.preset.empty() || o.preset == "gaussian") {
    if (pf.r == 0) pf.r = 10;
  } else {
    throw ConfigError("preset", "must be gaussian, entry-desk or entry-full");
  }
  if (!pf.delta && !pf.p && !pf.inv_rho) pf.inv_rho = 2.0;
  Options adjusted = o;
  adjusted.problem = pf;
  ProblemSpec spec = problem_spec(adjusted, dim);
  const auto algs = algorithm_list(o, {Algorithm::RGrad, Algorithm::RCG,
                                       Algorithm::RCGRestarted, Algorithm::ASD});
  if (o.trials < 1) throw ConfigError("trials", "must be >= 1");
  SolverConfig base = solver_config(o, Algorithm::RCG, spec.r);
  const BenchmarkResult res = convergence_benchmark(spec, algs, o.trials, base, o.threads);

  const auto dir = output_dir(o);
  {
    std::ofstream f = open_out(dir / "curve.csv");
    write_curve_csv(f, res);
  }
  {
    std::ofstream f = open_out(dir / "summary.csv");
    write_benchmark_summary_csv(f, res);
  }
  // One gnuplot-ready file per algorithm: iteration vs mean and std.
  for (const AlgorithmBenchmark& a : res.algorithms) {
    std::ofstream f = open_out(dir / ("curve_" + std::string(to_string(a.algorithm)) + ".dat"));
    f << "# iter mean_rel_residual std_rel_residual count\n";
    for (const CurvePoint& pt : a.curve) {
      f << pt.iter << ' ' << format_number(pt.mean) << ' ' << format_number(pt.stddev)
        << ' ' << pt.count << '\n';
    }
  }
  out << "algorithm,mean_iterations,converged,mean_seconds\n";
  for (const AlgorithmBenchmark& a : res.algorithms) {
    double iters = 0.0, secs = 0.0;
    int conv = 0;
    for (std::size_t k = 0; k < a.traces.size(); ++k) {
      iters += double(a.traces[k].iterations());
      secs += a.seconds[k];
      conv += a.traces[k].status == SolverStatus::Converged;
    }
    const double t = double(a.traces.size());
    out << to_string(a.algorithm) << ',' << iters / t << ',' << conv << '/'
        << a.traces.size() << ',' << secs / t << '\n';
  }
  return 0;
}

inline const char* kLowerBoundNote =
    "lower bound - guarantee check is necessary-direction only";

inline int run_theory(const Options& o, std::ostream& out) {
  GuaranteeInputs in;
  in.R2r = o.r2r;
  in.R3r = o.r3r;
  in.sigma_min = o.sigma_min;
  in.sigma_max = o.sigma_max;
  in.X_frob = o.x_frob;
  in.r = static_cast<int>(o.problem.r == 0 ? 1 : o.problem.r);
  in.kappa1 = o.solver.kappa1;
  in.kappa2 = o.solver.kappa2;
  in.current_error = o.current_error;
  Json j;
  if (o.ric_from_estimate) {
    ProblemSpec spec = problem_spec(o, 80);
    if (3 * spec.r > std::min(spec.m, spec.n)) throw ConfigError("r", "3r exceeds min(m, n)");
    const Problem prob = generate_problem(spec);
    std::visit([&](const auto& op) {
      in.R2r = estimate_ric_lower_bound(op, 2 * spec.r, o.ric_trials,
                                        derive_seed(o.seed, Stream::Estimator));
      in.R3r = estimate_ric_lower_bound(op, 3 * spec.r, o.ric_trials,
                                        derive_seed(o.seed, Stream::Estimator));
    }, prob.op);
    j["ric_source"] = kLowerBoundNote;
    j["r2r"] = in.R2r;
    j["r3r"] = in.R3r;
  }
  if (o.theory_alg != "rgrad" && o.theory_alg != "rcg" && o.theory_alg != "both") {
    throw ConfigError("theory-alg", "must be rgrad, rcg or both");
  }
  if (o.theory_alg != "rcg") j["rgrad"] = to_json(gamma_rgrad(in));
  if (o.theory_alg != "rgrad") j["rcg"] = to_json(gamma_rcg(in));
  out << j.dump(2) << '\n';
  return 0;
}

inline int run_ric(const Options& o, std::ostream& out) {
  ProblemSpec spec = problem_spec(o, 20);
  if (o.ric_trials < 1) throw ConfigError("trials", "must be >= 1");
  const Problem prob = generate_problem(spec);
  double est = 0.0;
  std::visit([&](const auto& op) {
    est = estimate_ric_lower_bound(op, spec.r, o.ric_trials,
                                   derive_seed(o.seed, Stream::Estimator));
  }, prob.op);
  Json j{{"r", spec.r}, {"trials", o.ric_trials}, {"estimate", est}, {"note", kLowerBoundNote}};
  std::visit([&](const auto& op) { j["operator"] = to_json(op.descriptor()); }, prob.op);
  out << j.dump(2) << '\n';
  return 0;
}

inline void add_problem_flags(CLI::App* s, Options& o) {
  s->add_option("--sensing", o.problem.sensing, "gaussian | entry");
  s->add_option("--m", o.problem.m, "rows");
  s->add_option("--n", o.problem.n, "columns");
  s->add_option("--r", o.problem.r, "rank");
  s->add_option("--delta", o.problem.delta, "undersampling ratio p/(mn)");
  s->add_option("--p", o.problem.p, "number of measurements");
  s->add_option("--inv-rho", o.problem.inv_rho, "p / ((m+n-r) r)");
  s->add_option("--scale", o.problem.scale, "Gaussian scale: normalized (1/sqrt p) | raw");
}

inline void add_solver_flags(CLI::App* s, Options& o) {
  s->add_option("--beta-rule", o.solver.beta_rule,
                "conjugate-orthogonal | fr | pr | pr-plus (rcg, rcg-restarted)");
  s->add_option("--kappa1", o.solver.kappa1, "restart cosine bound");
  s->add_option("--kappa2", o.solver.kappa2, "restart magnitude bound");
  s->add_option("--max-iters", o.solver.max_iters, "iteration cap");
  s->add_option("--tol", o.solver.tol, "relative residual target");
  s->add_option("--warm-start", o.solver.warm_start, "NIHT iterations before switching");
  s->add_option("--stall-window", o.solver.stall_window, "0 disables stall detection");
  s->add_option("--stall-tol", o.solver.stall_tol, "relative improvement per window");
  s->add_option("--subspace", o.solver.subspace, "tangent | column | row");
  s->add_flag("--full-svd", o.solver.full_svd, "retract through a full SVD");
}

}  // namespace detail

/// Runs the CLI; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Low-rank matrix recovery by hard thresholding and Riemannian optimization",
               "rlr"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", o.config, "JSON file with flag values");
  app.add_option("--seed", o.seed, "controls all randomness");
  app.add_option("--output-dir", o.output_dir, "artifact directory");
  app.add_option("--format", o.format, "solve trace format: csv | jsonl | json");
  app.add_option("--threads", o.threads, "worker threads (default RLR_THREADS or 1)");

  CLI::App* solve_cmd = app.add_subcommand("solve", "recover one random instance");
  solve_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  solve_cmd->add_option("--alg", o.alg, "niht | cgiht | rgrad | rcg | rcg-restarted | asd");
  detail::add_problem_flags(solve_cmd, o);
  detail::add_solver_flags(solve_cmd, o);
  solve_cmd->add_option("--ground-truth-seed", o.ground_truth_seed,
                        "seed of the ground-truth factors; enables rel_error");
  solve_cmd->add_flag("--dump-matrices", o.dump_matrices, "write X and X_hat as CSV");

  CLI::App* phase_cmd = app.add_subcommand("phase", "rank brackets per undersampling ratio");
  phase_cmd->add_option("--alg", o.algs, "algorithms (comma separated)")->delimiter(',');
  phase_cmd->add_option("--sensing", o.problem.sensing, "gaussian | entry");
  phase_cmd->add_option("--m", o.problem.m, "rows");
  phase_cmd->add_option("--n", o.problem.n, "columns");
  phase_cmd->add_option("--delta", o.deltas, "undersampling ratios (comma separated)")
      ->delimiter(',');
  phase_cmd->add_option("--trials", o.trials, "trials per rank");
  phase_cmd->add_option("--r-cap", o.r_cap, "largest rank tried");
  phase_cmd->add_option("--r-start", o.r_start, "first rank tried");
  phase_cmd->add_option("--preset", o.preset, "full | desk");
  detail::add_solver_flags(phase_cmd, o);
  for (CLI::Option* opt : phase_cmd->get_options()) {
    if (opt->get_name() != "--alg" && opt->get_name() != "--delta") {
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  }

  CLI::App* bench_cmd = app.add_subcommand("bench", "convergence curves");
  bench_cmd->add_option("--alg", o.algs, "algorithms (comma separated)")->delimiter(',');
  detail::add_problem_flags(bench_cmd, o);
  detail::add_solver_flags(bench_cmd, o);
  bench_cmd->add_option("--trials", o.trials, "instances per algorithm");
  bench_cmd->add_option("--preset", o.preset, "gaussian | entry-desk | entry-full");
  for (CLI::Option* opt : bench_cmd->get_options()) {
    if (opt->get_name() != "--alg") opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }

  CLI::App* theory_cmd = app.add_subcommand("theory", "guarantee constants");
  theory_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  theory_cmd->add_option("--r2r", o.r2r, "R_2r");
  theory_cmd->add_option("--r3r", o.r3r, "R_3r");
  theory_cmd->add_option("--sigma-min", o.sigma_min, "smallest singular value of X");
  theory_cmd->add_option("--sigma-max", o.sigma_max, "largest singular value of X");
  theory_cmd->add_option("--x-frob", o.x_frob, "||X||_F");
  theory_cmd->add_option("--kappa1", o.solver.kappa1, "restart cosine bound");
  theory_cmd->add_option("--kappa2", o.solver.kappa2, "restart magnitude bound");
  theory_cmd->add_option("--current-error", o.current_error, "||X_l - X||_F");
  theory_cmd->add_option("--theory-alg", o.theory_alg, "rgrad | rcg | both");
  theory_cmd->add_flag("--ric-from-estimate", o.ric_from_estimate,
                       "replace r2r/r3r by sampled lower bounds for a random operator");
  theory_cmd->add_option("--trials", o.ric_trials, "estimator samples per rank");
  theory_cmd->add_option("--sensing", o.problem.sensing, "gaussian | entry");
  theory_cmd->add_option("--m", o.problem.m, "rows");
  theory_cmd->add_option("--n", o.problem.n, "columns");
  theory_cmd->add_option("--r", o.problem.r, "rank");
  theory_cmd->add_option("--delta", o.problem.delta, "undersampling ratio");
  theory_cmd->add_option("--p", o.problem.p, "number of measurements");

  CLI::App* ric_cmd = app.add_subcommand("ric-estimate", "sampled RIC lower bound");
  ric_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  detail::add_problem_flags(ric_cmd, o);
  ric_cmd->add_option("--trials", o.ric_trials, "samples per rank");

  for (CLI::App* s : {solve_cmd, phase_cmd, bench_cmd, theory_cmd, ric_cmd}) s->fallthrough();

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
    CLI::App* sub = app.get_subcommands().front();
    if (!o.config.empty()) detail::apply_config_file(app, sub, o.config);
    if (!app.get_option("--threads")->count()) o.threads = 0;
    if (o.threads < 0) throw ConfigError("threads", "must be >= 0");

    const std::string name = sub->get_name();
    if (name == "solve") return detail::run_solve(o, out);
    if (name == "phase") return detail::run_phase(o, out);
    if (name == "bench") return detail::run_bench(o, out);
    if (name == "theory") return detail::run_theory(o, out);
    return detail::run_ric(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ContractViolation& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const BackendError& e) {
    err << "backend failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rlr::cli

#endif  // RLR_TOOLS_CLI_APP_HPP_
