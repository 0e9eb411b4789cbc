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

// Recovers a random rank-5 matrix from Gaussian measurements with RCG.

#include <iostream>

#include "rlr/rlr.hpp"

int main() {
  rlr::ProblemSpec spec;
  spec.m = 60;
  spec.n = 50;
  spec.r = 5;
  spec.inv_rho = 3.0;  // three measurements per degree of freedom
  spec.seed = 42;
  const rlr::Problem prob = rlr::generate_problem(spec);

  rlr::SolverConfig cfg;
  cfg.algorithm = rlr::Algorithm::RCG;
  cfg.rank = spec.r;
  const rlr::SolveResult res = rlr::solve(prob.op, prob.y, cfg, &prob.X);

  std::cout << "measurements: " << spec.measurements() << "\n"
            << "status:       " << rlr::to_string(res.trace.status) << "\n"
            << "iterations:   " << res.trace.iterations() << "\n"
            << "rel residual: " << res.trace.final_rel_residual() << "\n"
            << "rel error:    " << rlr::relative_frob_error(res.X, prob.X) << "\n";
  return res.trace.status == rlr::SolverStatus::Converged ? 0 : 1;
}
