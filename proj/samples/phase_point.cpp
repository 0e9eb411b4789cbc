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

// Brackets the recovery transition in rank for RGrad and RCG at one
// undersampling ratio on 40 x 40 Gaussian problems.

#include <iostream>

#include "rlr/rlr.hpp"

int main() {
  rlr::BracketOptions o;
  o.m = o.n = 40;
  o.delta = 0.3;
  o.trials = 5;
  o.base_seed = 3;
  rlr::write_phase_csv_header(std::cout);
  for (rlr::Algorithm alg : {rlr::Algorithm::RGrad, rlr::Algorithm::RCG}) {
    rlr::write_phase_csv_row(std::cout, rlr::bracket_rank(o, alg));
  }
  return 0;
}
