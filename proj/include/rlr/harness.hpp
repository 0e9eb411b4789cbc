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

#ifndef RLR_HARNESS_HPP_
#define RLR_HARNESS_HPP_

// Random problem generation and the two experiment drivers:
//
//   bracket_rank()           recovery phase transition at fixed delta = p/(mn)
//   convergence_benchmark()  residual curves of several solvers on shared
//                            problem instances
//
// Oversampling ratio: rho = (m + n - r) r / p.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rlr/errors.hpp"
#include "rlr/matcore.hpp"
#include "rlr/random.hpp"
#include "rlr/sensing.hpp"
#include "rlr/solvers.hpp"

namespace rlr {

inline double undersampling_ratio(Index m, Index n, Index p) {
  return static_cast<double>(p) / static_cast<double>(m * n);
}

inline double oversampling_ratio(Index m, Index n, Index r, Index p) {
  return static_cast<double>((m + n - r) * r) / static_cast<double>(p);
}

struct ProblemSpec {
  Index m = 80;
  Index n = 80;
  Index r = 1;
  SensingKind sensing = SensingKind::Gaussian;
  /// Exactly one of delta, p, inv_rho fixes the number of measurements.
  std::optional<double> delta;
  std::optional<Index> p;
  std::optional<double> inv_rho;  // p = round(inv_rho (m + n - r) r)
  bool normalized = true;         // Gaussian scale 1/sqrt(p), else 1
  std::uint64_t seed = 0;
  /// Seeds the factors of X instead of `seed` when set.
  std::optional<std::uint64_t> truth_seed;

  Index measurements() const {
    const int given = int(delta.has_value()) + int(p.has_value()) +
                      int(inv_rho.has_value());
    if (given != 1) {
      throw ConfigError("delta", "give exactly one of delta, p, inv_rho");
    }
    Index out = 0;
    if (delta) {
      if (!(*delta > 0.0 && *delta <= 1.0)) {
        throw ConfigError("delta", "must lie in (0, 1]");
      }
      out = std::llround(*delta * static_cast<double>(m * n));
    } else if (p) {
      out = *p;
    } else {
      if (!(*inv_rho > 0.0)) throw ConfigError("inv_rho", "must be positive");
      out = std::llround(*inv_rho * static_cast<double>((m + n - r) * r));
    }
    if (out < 1 || out > m * n) throw ConfigError("p", "must lie in [1, m n]");
    return out;
  }

  void validate() const {
    if (m < 1) throw ConfigError("m", "must be >= 1");
    if (n < 1) throw ConfigError("n", "must be >= 1");
    if (r < 1 || r > std::min(m, n)) throw ConfigError("r", "must lie in [1, min(m, n)]");
    measurements();
  }

  /// (m + n - r) r > p: more unknowns than measurements. Allowed, but no
  /// method can succeed there in general.
  bool oversampled() const { return (m + n - r) * r > measurements(); }
};

struct Problem {
  Matrix X;
  AnyOperator op;
  Vector y;
};

/// X = L R with i.i.d. N(0, 1) factors L (m x r), R (r x n) and y = A(X).
/// The factor and operator streams are both derived from spec.seed (the
/// factors from spec.truth_seed when given).
inline Problem generate_problem(const ProblemSpec& spec) {
  spec.validate();
  const Index p = spec.measurements();
  Rng rng(derive_seed(spec.truth_seed.value_or(spec.seed), Stream::Factors));
  Matrix L = gaussian_matrix(spec.m, spec.r, rng);
  Matrix R = gaussian_matrix(spec.r, spec.n, rng);
  Matrix X = L * R;
  const std::uint64_t op_seed = derive_seed(spec.seed, Stream::Operator);
  AnyOperator op = spec.sensing == SensingKind::Entry
      ? AnyOperator(EntrySensing(spec.m, spec.n, p, op_seed))
      : AnyOperator(GaussianSensing(spec.m, spec.n, p, op_seed,
                                    spec.normalized
                                        ? GaussianSensing::Scale::Normalized
                                        : GaussianSensing::Scale::Raw));
  Vector y = std::visit([&](const auto& o) { return o.apply(X); }, op);
  return {std::move(X), std::move(op), std::move(y)};
}

inline constexpr double kSuccessThreshold = 1e-2;

/// ||X_hat - X||_F / ||X||_F <= 1e-2.
inline bool is_success(const Matrix& X_hat, const Matrix& X,
                       double threshold = kSuccessThreshold) {
  return relative_frob_error(X_hat, X) <= threshold;
}

struct TrialOutcome {
  Index trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  Index iterations = 0;
  SolverStatus status = SolverStatus::MaxIters;
  double rel_error = 0.0;
  double rel_residual = 0.0;
};

/// Runs one trial of the problem described by `spec` (spec.seed is the trial
/// seed). Stubs can replace the solver in tests.
using TrialRunner = std::function<TrialOutcome(const ProblemSpec&)>;

/// Solver settings for phase-transition trials. A trial only has to decide
/// success at relative error 1e-2, so the residual target is looser than the
/// solver default; the iteration cap is the solver default.
inline SolverConfig phase_solver_config(Algorithm alg) {
  SolverConfig c;
  c.algorithm = alg;
  c.rel_residual_tol = 1e-6;
  return c;
}

inline TrialRunner solver_runner(SolverConfig base) {
  return [base](const ProblemSpec& spec) {
    Problem prob = generate_problem(spec);
    SolverConfig cfg = base;
    cfg.rank = spec.r;
    cfg.seed = spec.seed;
    SolveResult res = solve(prob.op, prob.y, cfg);
    TrialOutcome out;
    out.seed = spec.seed;
    out.rel_error = relative_frob_error(res.X, prob.X);
    out.success = out.rel_error <= kSuccessThreshold;
    out.iterations = res.trace.iterations();
    out.status = res.trace.status;
    out.rel_residual = res.trace.final_rel_residual();
    return out;
  };
}

struct PhaseCell {
  double delta = 0.0;
  Index r = 0;
  double rho = 0.0;
  Index successes = 0;
  Index trials = 0;  // trials actually run (early abort may stop short)
  std::vector<TrialOutcome> outcomes;

  bool all_success() const { return trials > 0 && successes == trials; }
  bool all_fail() const { return trials > 0 && successes == 0; }
};

struct PhaseRow {
  double delta = 0.0;
  Index m = 0, n = 0, p = 0;
  std::string algorithm;
  /// Largest rank with every trial recovered; 0 when even rank 1 fails.
  Index r_min = 0;
  /// Smallest rank above r_min with every trial failed; unset when no such
  /// rank exists up to r_cap.
  std::optional<Index> r_max;
  double rho_min = 0.0;
  std::optional<double> rho_max;
  std::vector<PhaseCell> cells;  // ascending in r
};

/// Worker count: explicit value if positive, else RLR_THREADS, else 1.
inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("RLR_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

struct BracketOptions {
  Index m = 80;
  Index n = 80;
  SensingKind sensing = SensingKind::Gaussian;
  double delta = 0.1;
  Index trials = 10;
  /// Largest rank tried; 0 means min(m, n).
  Index r_cap = 0;
  /// First rank tried; 0 picks the largest r with rho <= 1/2 (at least 1).
  /// The sweep moves down from here until every trial succeeds.
  Index r_start = 0;
  /// Stop a cell as soon as it holds both a success and a failure.
  bool early_abort = true;
  std::uint64_t base_seed = 0;
  int threads = 0;
  std::string algorithm_label;
};

inline std::uint64_t trial_seed(std::uint64_t base, double delta, Index r,
                                Index trial) {
  return mix_seed({base, seed_key(delta), static_cast<std::uint64_t>(r),
                   static_cast<std::uint64_t>(trial)});
}

namespace detail {

inline PhaseCell run_cell(const BracketOptions& o, Index p, Index r,
                          const TrialRunner& runner, unsigned threads) {
  PhaseCell cell;
  cell.delta = o.delta;
  cell.r = r;
  cell.rho = oversampling_ratio(o.m, o.n, r, p);
  bool seen_success = false, seen_failure = false;
  Index next = 0;
  while (next < o.trials) {
    const Index batch = std::min<Index>(threads, o.trials - next);
    std::vector<TrialOutcome> results(static_cast<std::size_t>(batch));
    auto run_one = [&](Index k) {
      ProblemSpec spec;
      spec.m = o.m;
      spec.n = o.n;
      spec.r = r;
      spec.sensing = o.sensing;
      spec.p = p;
      spec.seed = trial_seed(o.base_seed, o.delta, r, next + k);
      results[static_cast<std::size_t>(k)] = runner(spec);
      results[static_cast<std::size_t>(k)].trial = next + k;
      results[static_cast<std::size_t>(k)].seed = spec.seed;
    };
    if (batch == 1) {
      run_one(0);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(batch));
      for (Index k = 0; k < batch; ++k) {
        pool.emplace_back([&, k] {
          try {
            run_one(k);
          } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    // Results are consumed in trial order so the recorded prefix does not
    // depend on the thread count.
    for (const TrialOutcome& t : results) {
      cell.outcomes.push_back(t);
      ++cell.trials;
      if (t.success) {
        ++cell.successes;
        seen_success = true;
      } else {
        seen_failure = true;
      }
      if (o.early_abort && seen_success && seen_failure) return cell;
    }
    next += batch;
  }
  return cell;
}

}  // namespace detail

/// Recovery phase transition at one undersampling ratio: starting from a
/// rank where all trials succeed, the rank grows by one until all trials
/// fail. Trial seeds are hash(base_seed, delta, r, trial).
inline PhaseRow bracket_rank(const BracketOptions& o, const TrialRunner& runner) {
  if (o.m < 1 || o.n < 1) throw ConfigError("m", "dimensions must be positive");
  if (!(o.delta > 0.0 && o.delta <= 1.0)) throw ConfigError("delta", "must lie in (0, 1]");
  if (o.trials < 1) throw ConfigError("trials", "must be >= 1");
  const Index cap = o.r_cap > 0 ? o.r_cap : std::min(o.m, o.n);
  if (cap > std::min(o.m, o.n)) throw ConfigError("r_cap", "exceeds min(m, n)");
  const Index p = std::llround(o.delta * static_cast<double>(o.m * o.n));
  if (p < 1) throw ConfigError("delta", "gives p < 1");
  const unsigned threads = resolve_threads(o.threads);

  std::map<Index, PhaseCell> cells;
  auto cell_at = [&](Index r) -> const PhaseCell& {
    auto it = cells.find(r);
    if (it == cells.end()) {
      it = cells.emplace(r, detail::run_cell(o, p, r, runner, threads)).first;
    }
    return it->second;
  };

  Index r = o.r_start;
  if (r <= 0) {
    r = 1;
    while (r + 1 <= cap && 2 * (o.m + o.n - r - 1) * (r + 1) <= p) ++r;
  }
  r = std::clamp<Index>(r, 1, cap);
  while (r > 1 && !cell_at(r).all_success()) --r;

  PhaseRow row;
  row.delta = o.delta;
  row.m = o.m;
  row.n = o.n;
  row.p = p;
  row.algorithm = o.algorithm_label;
  row.r_min = cell_at(r).all_success() ? r : 0;
  for (Index k = r + 1; k <= cap; ++k) {
    const PhaseCell& c = cell_at(k);
    if (c.all_fail()) {
      row.r_max = k;
      break;
    }
    if (c.all_success()) row.r_min = k;
  }
  if (row.r_min == 0 && cell_at(1).all_fail()) row.r_max = 1;

  row.rho_min = row.r_min > 0 ? oversampling_ratio(o.m, o.n, row.r_min, p) : 0.0;
  if (row.r_max) row.rho_max = oversampling_ratio(o.m, o.n, *row.r_max, p);
  for (auto& [k, c] : cells) row.cells.push_back(std::move(c));
  return row;
}

/// Solver-backed bracket with the phase settings for `alg`.
inline PhaseRow bracket_rank(const BracketOptions& o, Algorithm alg) {
  BracketOptions opts = o;
  if (opts.algorithm_label.empty()) opts.algorithm_label = std::string(to_string(alg));
  return bracket_rank(opts, solver_runner(phase_solver_config(alg)));
}

/// The default sweep: 18 equispaced values 0.1, 0.15, ..., 0.95.
inline std::vector<double> default_delta_grid() {
  std::vector<double> out;
  for (int k = 0; k < 18; ++k) out.push_back(0.1 + 0.05 * k);
  return out;
}

struct CurvePoint {
  Index iter = 0;
  Index count = 0;  // trials still running at this iteration
  double mean = 0.0;
  double stddev = 0.0;
};

struct AlgorithmBenchmark {
  Algorithm algorithm = Algorithm::RGrad;
  std::vector<SolverTrace> traces;  // one per trial, trial order
  std::vector<double> seconds;      // wall clock per trial; not deterministic
  std::vector<CurvePoint> curve;    // rel_residual statistics per iteration
};

struct BenchmarkResult {
  ProblemSpec spec;  // seed field holds the base seed
  Index trials = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<AlgorithmBenchmark> algorithms;
};

/// Mean and (population) standard deviation of rel_residual across the
/// trials still running at each iteration.
inline std::vector<CurvePoint> residual_curve(const std::vector<SolverTrace>& traces) {
  std::vector<CurvePoint> out;
  for (Index l = 0;; ++l) {
    CurvePoint pt;
    pt.iter = l;
    double sum = 0.0, sum2 = 0.0;
    for (const SolverTrace& t : traces) {
      const auto idx = static_cast<std::size_t>(l);
      if (idx < t.records.size()) {
        const double v = t.records[idx].rel_residual;
        sum += v;
        sum2 += v * v;
        ++pt.count;
      }
    }
    if (pt.count == 0) break;
    pt.mean = sum / static_cast<double>(pt.count);
    pt.stddev = std::sqrt(std::max(0.0, sum2 / static_cast<double>(pt.count) -
                                            pt.mean * pt.mean));
    out.push_back(pt);
  }
  return out;
}

/// Runs every algorithm on the same `trials` problem instances (instance k
/// uses seed mix(spec.seed, k)). `base` supplies tolerances; its algorithm
/// and rank fields are overwritten.
inline BenchmarkResult convergence_benchmark(const ProblemSpec& spec,
                                             const std::vector<Algorithm>& algorithms,
                                             Index trials = 10,
                                             SolverConfig base = {},
                                             int threads = 0) {
  spec.validate();
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  BenchmarkResult out;
  out.spec = spec;
  out.trials = trials;
  for (Index k = 0; k < trials; ++k) {
    out.trial_seeds.push_back(mix_seed({spec.seed, static_cast<std::uint64_t>(k)}));
  }
  const unsigned nthreads = resolve_threads(threads);
  for (Algorithm alg : algorithms) {
    AlgorithmBenchmark ab;
    ab.algorithm = alg;
    ab.traces.resize(static_cast<std::size_t>(trials));
    ab.seconds.resize(static_cast<std::size_t>(trials));
    auto run = [&](Index k) {
      ProblemSpec s = spec;
      s.seed = out.trial_seeds[static_cast<std::size_t>(k)];
      Problem prob = generate_problem(s);
      SolverConfig cfg = base;
      cfg.algorithm = alg;
      cfg.rank = spec.r;
      cfg.seed = s.seed;
      if (alg != Algorithm::RCG && alg != Algorithm::RCGRestarted) cfg.beta_rule.reset();
      const auto t0 = std::chrono::steady_clock::now();
      SolveResult res = solve(prob.op, prob.y, cfg, &prob.X);
      ab.seconds[static_cast<std::size_t>(k)] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      ab.traces[static_cast<std::size_t>(k)] = std::move(res.trace);
    };
    for (Index k = 0; k < trials; k += nthreads) {
      const Index batch = std::min<Index>(nthreads, trials - k);
      if (batch == 1) {
        run(k);
        continue;
      }
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(batch));
      for (Index j = 0; j < batch; ++j) {
        pool.emplace_back([&, j] {
          try {
            run(k + j);
          } catch (...) {
            errors[static_cast<std::size_t>(j)] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    ab.curve = residual_curve(ab.traces);
    out.algorithms.push_back(std::move(ab));
  }
  return out;
}

}  // namespace rlr

#endif  // RLR_HARNESS_HPP_
