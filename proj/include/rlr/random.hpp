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

#ifndef RLR_RANDOM_HPP_
#define RLR_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "rlr/matcore.hpp"

namespace rlr {

using Rng = std::mt19937_64;

/// One splitmix64 round; used to decorrelate derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive hash of a tuple of 64-bit values.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

/// Quantizes a real parameter (e.g. an undersampling ratio) so it can take
/// part in a seed hash reproducibly.
inline std::uint64_t seed_key(double value) {
  return static_cast<std::uint64_t>(std::llround(value * 1e9));
}

/// Purpose tags keep the streams for the ground truth and the operator apart.
enum class Stream : std::uint64_t { Operator = 1, Factors = 2, Estimator = 3 };

inline std::uint64_t derive_seed(std::uint64_t seed, Stream s) {
  return mix_seed({seed, static_cast<std::uint64_t>(s)});
}

inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(rows, cols);
  double* data = M.data();
  for (Index i = 0, n = M.size(); i < n; ++i) data[i] = normal(rng);
  return M;
}

}  // namespace rlr

#endif  // RLR_RANDOM_HPP_
