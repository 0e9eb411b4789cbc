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

// Gradient steps restricted to the column space of the iterate never move
// the row space, so they cannot recover X from a generic start. Tangent
// space steps can.

#include <iostream>

#include "rlr/rlr.hpp"

int main() {
  rlr::ProblemSpec spec;
  spec.m = spec.n = 30;
  spec.r = 2;
  spec.inv_rho = 3.0;
  spec.seed = 7;
  const rlr::Problem prob = rlr::generate_problem(spec);

  for (rlr::Subspace sel : {rlr::Subspace::Tangent, rlr::Subspace::ColumnOnly,
                            rlr::Subspace::RowOnly}) {
    rlr::SolverConfig cfg;
    cfg.algorithm = rlr::Algorithm::RGrad;
    cfg.rank = spec.r;
    cfg.subspace = sel;
    cfg.max_iters = 2000;
    const rlr::SolveResult res = rlr::solve(prob.op, prob.y, cfg);
    std::cout << rlr::to_string(sel) << ": " << rlr::to_string(res.trace.status) << " after "
              << res.trace.iterations() << " iterations, rel error "
              << rlr::relative_frob_error(res.X, prob.X) << "\n";
  }
  return 0;
}
