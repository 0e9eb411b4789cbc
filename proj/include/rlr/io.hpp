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

#ifndef RLR_IO_HPP_
#define RLR_IO_HPP_

// JSON / JSONL / CSV serialization of descriptors, traces, guarantee
// reports and experiment results. Numbers are printed with 17 significant
// digits so files round-trip and repeated runs are byte-identical.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "rlr/harness.hpp"
#include "rlr/sensing.hpp"
#include "rlr/solvers.hpp"
#include "rlr/theory.hpp"

namespace rlr {

using Json = nlohmann::ordered_json;

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json to_json(const SensingDescriptor& d) {
  return Json{{"kind", std::string(to_string(d.kind))},
              {"m", d.m},
              {"n", d.n},
              {"p", d.p},
              {"seed", d.seed},
              {"scale", d.scale}};
}

inline SensingDescriptor descriptor_from_json(const Json& j) {
  SensingDescriptor d;
  try {
    const auto kind = parse_sensing(j.at("kind").get<std::string>());
    if (!kind) throw ConfigError("kind", "must be gaussian or entry");
    d.kind = *kind;
    d.m = j.at("m").get<Index>();
    d.n = j.at("n").get<Index>();
    d.p = j.at("p").get<Index>();
    d.seed = j.at("seed").get<std::uint64_t>();
    d.scale = j.value("scale", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("descriptor", e.what());
  }
  return d;
}

inline Json to_json(const IterationRecord& r) {
  Json j{{"iter", r.iter},
         {"rel_residual", r.rel_residual},
         {"alpha", r.alpha},
         {"beta", r.beta},
         {"restarted", r.restarted}};
  j["rel_error"] = r.rel_error ? Json(*r.rel_error) : Json(nullptr);
  j["applications"] = r.applications;
  return j;
}

/// One JSON object per iteration.
inline void write_trace_jsonl(std::ostream& os, const SolverTrace& t) {
  for (const IterationRecord& r : t.records) os << to_json(r).dump() << '\n';
}

/// Header: iter,rel_residual,alpha,beta,restarted,rel_error (rel_error left
/// empty without ground truth).
inline void write_trace_csv(std::ostream& os, const SolverTrace& t) {
  os << "iter,rel_residual,alpha,beta,restarted,rel_error\n";
  for (const IterationRecord& r : t.records) {
    os << r.iter << ',' << format_number(r.rel_residual) << ','
       << format_number(r.alpha) << ',' << format_number(r.beta) << ','
       << (r.restarted ? 1 : 0) << ',';
    if (r.rel_error) os << format_number(*r.rel_error);
    os << '\n';
  }
}

inline Json to_json(const GuaranteeReport& g) {
  auto opt = [](const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
  };
  return Json{{"gamma", g.gamma},
              {"mu", g.mu},
              {"epsilon_alpha", opt(g.epsilon_alpha)},
              {"epsilon_beta", opt(g.epsilon_beta)},
              {"tau1", opt(g.tau1)},
              {"tau2", opt(g.tau2)},
              {"satisfied", g.satisfied},
              {"ric_sufficient", g.ric_sufficient},
              {"ric_condition_met", g.ric_condition_met},
              {"per_step_factor", opt(g.per_step_factor)}};
}

inline void write_phase_csv_header(std::ostream& os) {
  os << "delta,algorithm,r_min,r_max,rho_min,rho_max\n";
}

/// r_max above the rank cap is written as "above_cap" with an empty rho_max.
inline void write_phase_csv_row(std::ostream& os, const PhaseRow& row) {
  os << format_number(row.delta) << ',' << row.algorithm << ',' << row.r_min
     << ',';
  if (row.r_max) os << *row.r_max;
  else os << "above_cap";
  os << ',' << format_number(row.rho_min) << ',';
  if (row.rho_max) os << format_number(*row.rho_max);
  os << '\n';
}

/// One record per (delta, r, trial).
inline void write_cells_jsonl(std::ostream& os, const PhaseRow& row) {
  for (const PhaseCell& c : row.cells) {
    for (const TrialOutcome& t : c.outcomes) {
      Json j{{"algorithm", row.algorithm},
             {"delta", c.delta},
             {"r", c.r},
             {"rho", c.rho},
             {"trial", t.trial},
             {"seed", t.seed},
             {"success", t.success},
             {"iterations", t.iterations},
             {"status", std::string(to_string(t.status))},
             {"rel_error", t.rel_error},
             {"rel_residual", t.rel_residual}};
      os << j.dump() << '\n';
    }
  }
}

/// Header: algorithm,iter,count,mean_rel_residual,std_rel_residual.
inline void write_curve_csv(std::ostream& os, const BenchmarkResult& b) {
  os << "algorithm,iter,count,mean_rel_residual,std_rel_residual\n";
  for (const AlgorithmBenchmark& a : b.algorithms) {
    for (const CurvePoint& p : a.curve) {
      os << to_string(a.algorithm) << ',' << p.iter << ',' << p.count << ','
         << format_number(p.mean) << ',' << format_number(p.stddev) << '\n';
    }
  }
}

/// Header: algorithm,trial,seed,status,iterations,applications,final_rel_residual,final_rel_error.
inline void write_benchmark_summary_csv(std::ostream& os, const BenchmarkResult& b) {
  os << "algorithm,trial,seed,status,iterations,applications,final_rel_residual,"
        "final_rel_error\n";
  for (const AlgorithmBenchmark& a : b.algorithms) {
    for (std::size_t k = 0; k < a.traces.size(); ++k) {
      const SolverTrace& t = a.traces[k];
      os << to_string(a.algorithm) << ',' << k << ',' << b.trial_seeds[k] << ','
         << to_string(t.status) << ',' << t.iterations() << ','
         << t.applications() << ',' << format_number(t.final_rel_residual()) << ',';
      if (!t.records.empty() && t.records.back().rel_error) {
        os << format_number(*t.records.back().rel_error);
      }
      os << '\n';
    }
  }
}

}  // namespace rlr

#endif  // RLR_IO_HPP_
