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

#ifndef RLR_TESTS_TEST_SUPPORT_HPP_
#define RLR_TESTS_TEST_SUPPORT_HPP_

// Seeded generators shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "rlr/matcore.hpp"
#include "rlr/random.hpp"
#include "rlr/sensing.hpp"
#include "rlr/tangent.hpp"

namespace rlr::testing {

inline Matrix random_matrix(Index m, Index n, Rng& rng) {
  return gaussian_matrix(m, n, rng);
}

inline Matrix random_rank(Index m, Index n, Index r, Rng& rng) {
  return gaussian_matrix(m, r, rng) * gaussian_matrix(r, n, rng);
}

inline Matrix random_orthonormal(Index m, Index k, Rng& rng) {
  return qr_thin(gaussian_matrix(m, k, rng)).Q;
}

inline Index uniform_index(Index lo, Index hi, Rng& rng) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline double uniform_real(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Tangent space of a random rank-r matrix with singular values in [1, 5].
inline TangentSpace random_space(Index m, Index n, Index r, Rng& rng) {
  TangentSpace S;
  S.U = random_orthonormal(m, r, rng);
  S.V = random_orthonormal(n, r, rng);
  S.sigma.resize(r);
  for (Index i = 0; i < r; ++i) S.sigma(i) = uniform_real(1.0, 5.0, rng);
  std::sort(S.sigma.data(), S.sigma.data() + r, std::greater<double>());
  return S;
}

/// Singular values from the eigenvalues of M^T M (or M M^T), descending.
inline Vector singular_values_by_eig(const Matrix& M) {
  const Matrix G = M.rows() >= M.cols() ? Matrix(M.transpose() * M)
                                        : Matrix(M * M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G);
  Vector ev = eig.eigenvalues().reverse();
  return ev.cwiseMax(0.0).cwiseSqrt();
}

/// Singular values by two-sided Jacobi; accurate for tiny values, which the
/// eigenvalue route is not.
inline Vector jacobi_singular_values(const Matrix& M) {
  return Eigen::JacobiSVD<Matrix>(M).singularValues();
}

/// Best rank-r approximation through a full two-sided Jacobi SVD.
inline Matrix full_svd_truncation(const Matrix& M, Index r) {
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal() *
         svd.matrixV().leftCols(r).transpose();
}

/// Largest gap between retract_fast and the full-SVD truncation of
/// X + P_S(Z) over random instances with m, n <= max_dim and r <= max_rank.
/// Every fourth instance takes Z already in S (so Up = Vp = 0).
inline double retraction_oracle_gap(int instances, Index max_dim, Index max_rank,
                                    Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < instances; ++t) {
    const Index r = uniform_index(1, max_rank, rng);
    const Index m = uniform_index(std::max<Index>(2 * r, 2), max_dim, rng);
    const Index n = uniform_index(std::max<Index>(2 * r, 2), max_dim, rng);
    const TangentSpace S = random_space(m, n, r, rng);
    Matrix Z = gaussian_matrix(m, n, rng) * uniform_real(0.1, 3.0, rng);
    if (t % 4 == 3) Z = project(S, Z);
    const auto [X_fast, next] = retract_fast(S, Z, r);
    const Matrix oracle = full_svd_truncation(S.point() + project(S, Z), r);
    worst = std::max(worst, (X_fast - oracle).norm());
    (void)next;
  }
  return worst;
}

/// A rank-r pair (X_l, X) with ||X_l - X||_F / sigma_min(X) spread
/// log-uniformly over roughly [1e-3, 0.5].
inline std::pair<Matrix, Matrix> perturbed_pair(Index m, Index n, Index r, Rng& rng) {
  Matrix X = random_rank(m, n, r, rng);
  const double smin = thin_svd(X, r).S(r - 1);
  const double target = std::exp(uniform_real(std::log(1e-3), std::log(0.5), rng));
  Matrix D = gaussian_matrix(m, n, rng);
  Matrix X_l = hard_threshold(X + (target * smin / D.norm()) * D, r);
  return {std::move(X_l), std::move(X)};
}

struct OrthogonalityDiagnostic {
  double ric_estimate = 0.0;  // sampled lower bound on R_{r1 + r2}
  double worst_ratio = 0.0;   // max |<A Z1, A Z2>| / (||Z1|| ||Z2||)
  bool holds(double slack) const { return worst_ratio <= ric_estimate + slack; }
};

/// Pairs Z1 = U1 B1 V1^T, Z2 = U2 B2 V2^T with orthogonal column spaces
/// (so <Z1, Z2> = 0), ranks r1 and r2, checked against a sampled RIC
/// estimate for rank r1 + r2.
template <SensingOperator Op>
OrthogonalityDiagnostic restricted_orthogonality(const Op& op, Index r1, Index r2,
                                                 int pairs, Index ric_trials,
                                                 std::uint64_t seed) {
  const Index m = op.rows(), n = op.cols();
  OrthogonalityDiagnostic out;
  out.ric_estimate = estimate_ric_lower_bound(op, r1 + r2, ric_trials, seed);
  Rng rng(seed ^ 0x5bd1e995ULL);
  for (int t = 0; t < pairs; ++t) {
    Matrix U = random_orthonormal(m, r1 + r2, rng);
    Matrix Z1 = U.leftCols(r1) * gaussian_matrix(r1, r1, rng) *
                random_orthonormal(n, r1, rng).transpose();
    Matrix Z2 = U.rightCols(r2) * gaussian_matrix(r2, r2, rng) *
                random_orthonormal(n, r2, rng).transpose();
    const double ratio = std::abs(op.apply(Z1).dot(op.apply(Z2))) /
                         (Z1.norm() * Z2.norm());
    out.worst_ratio = std::max(out.worst_ratio, ratio);
  }
  return out;
}

}  // namespace rlr::testing

#endif  // RLR_TESTS_TEST_SUPPORT_HPP_
