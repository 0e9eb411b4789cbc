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

#ifndef RLR_RLR_HPP_
#define RLR_RLR_HPP_

#include "rlr/errors.hpp"
#include "rlr/matcore.hpp"
#include "rlr/random.hpp"
#include "rlr/sensing.hpp"
#include "rlr/tangent.hpp"
#include "rlr/solvers.hpp"
#include "rlr/theory.hpp"
#include "rlr/harness.hpp"
#include "rlr/io.hpp"

#endif  // RLR_RLR_HPP_
