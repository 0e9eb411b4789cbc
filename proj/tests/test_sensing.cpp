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

#include <cmath>
#include <set>
#include <utility>

#include <gtest/gtest.h>

#include "rlr/sensing.hpp"
#include "test_support.hpp"

namespace rlr {
namespace {

using testing::random_matrix;
using testing::random_rank;

template <typename Op>
void expect_adjoint_identity(const Op& op, Rng& rng, int pairs) {
  for (int t = 0; t < pairs; ++t) {
    Matrix Z = random_matrix(op.rows(), op.cols(), rng);
    Vector v = random_matrix(op.measurements(), 1, rng);
    const double lhs = op.apply(Z).dot(v);
    const double rhs = frob_inner(Z, op.adjoint(v));
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * op.apply(Z).norm() * v.norm());
  }
}

TEST(GaussianSensingTest, ZeroMapsToZero) {
  GaussianSensing op(5, 4, 7, 1);
  EXPECT_EQ(op.apply(Matrix::Zero(5, 4)).norm(), 0.0);
}

TEST(GaussianSensingTest, SingleMeasurementMatchesDoubleLoop) {
  GaussianSensing op(3, 3, 1, 42);
  // Independent regeneration of the N(0,1) stream: one vectorized matrix.
  Rng rng(42);
  Matrix raw = gaussian_matrix(9, 1, rng);
  Rng zr(5);
  Matrix Z = random_matrix(3, 3, zr);
  double expect = 0.0;
  for (Index j = 0; j < 3; ++j) {
    for (Index i = 0; i < 3; ++i) expect += raw(i + 3 * j, 0) * Z(i, j);
  }
  EXPECT_NEAR(op.apply(Z)(0), expect, 1e-14);
}

TEST(GaussianSensingTest, RawScaleIsUnscaledNormalized) {
  GaussianSensing raw(4, 3, 6, 9, GaussianSensing::Scale::Raw);
  GaussianSensing nrm(4, 3, 6, 9);
  EXPECT_EQ(raw.scale(), 1.0);
  EXPECT_DOUBLE_EQ(nrm.scale(), 1.0 / std::sqrt(6.0));
  Rng rng(1);
  Matrix Z = random_matrix(4, 3, rng);
  EXPECT_LE((raw.apply(Z) * nrm.scale() - nrm.apply(Z)).norm(), 1e-14);
}

TEST(GaussianSensingTest, AdjointIdentity) {
  GaussianSensing op(6, 5, 17, 3);
  Rng rng(7);
  expect_adjoint_identity(op, rng, 100);
}

TEST(GaussianSensingTest, FactoredAndPairedPathsAgreeWithDense) {
  GaussianSensing op(7, 6, 20, 4);
  Rng rng(8);
  FactoredMatrix F{random_matrix(7, 2, rng), random_matrix(6, 2, rng)};
  FactoredMatrix G{random_matrix(7, 3, rng), random_matrix(6, 3, rng)};
  EXPECT_LE((op.apply(F) - op.apply(F.dense())).norm(), 1e-12 * op.apply(F).norm());
  auto [a, b] = op.apply_pair(F, G);
  EXPECT_LE((a - op.apply(F.dense())).norm(), 1e-12 * a.norm());
  EXPECT_LE((b - op.apply(G.dense())).norm(), 1e-12 * b.norm());

  Vector v = random_matrix(20, 1, rng);
  Matrix U = random_matrix(7, 2, rng), V = random_matrix(6, 2, rng);
  Matrix A = op.adjoint(v);
  EXPECT_LE((op.adjoint_mul(v, V) - A * V).norm(), 1e-12 * (A * V).norm());
  EXPECT_LE((op.adjoint_tmul(v, U) - A.transpose() * U).norm(),
            1e-12 * (A.transpose() * U).norm());
  auto [GV, GtU] = op.adjoint_products(v, U, V);
  EXPECT_LE((GV - A * V).norm(), 1e-12 * GV.norm());
  EXPECT_LE((GtU - A.transpose() * U).norm(), 1e-12 * GtU.norm());
}

TEST(GaussianSensingTest, RejectsBadShapes) {
  EXPECT_THROW(GaussianSensing(2, 2, 5, 0), ContractViolation);
  EXPECT_NO_THROW(GaussianSensing(2, 2, 4, 0));
  GaussianSensing op(3, 2, 4, 0);
  EXPECT_THROW(op.apply(Matrix::Zero(2, 3)), ContractViolation);
  EXPECT_THROW(op.adjoint(Vector::Zero(3)), ContractViolation);
}

TEST(GaussianSensingTest, SeedDeterminism) {
  GaussianSensing a(5, 5, 12, 99), b(5, 5, 12, 99), c(5, 5, 12, 100);
  for (Index l = 0; l < 12; ++l) {
    EXPECT_TRUE((a.sensing_matrix(l).array() == b.sensing_matrix(l).array()).all());
  }
  EXPECT_FALSE((a.sensing_matrix(0).array() == c.sensing_matrix(0).array()).all());
}

TEST(EntrySensingTest, FullSamplingIsVectorization) {
  EntrySensing op(4, 3, 12, 5);
  Rng rng(2);
  Matrix Z = random_matrix(4, 3, rng);
  Vector vecZ = Eigen::Map<const Vector>(Z.data(), Z.size());
  EXPECT_EQ((op.apply(Z) - vecZ).norm(), 0.0);
  EXPECT_EQ((op.adjoint(op.apply(Z)) - Z).norm(), 0.0);
}

TEST(EntrySensingTest, ZeroMapsToZero) {
  EntrySensing op(5, 4, 7, 1);
  EXPECT_EQ(op.apply(Matrix::Zero(5, 4)).norm(), 0.0);
}

TEST(EntrySensingTest, AdjointOfApplyIsMask) {
  EntrySensing op(4, 4, 5, 17);
  Rng rng(3);
  Matrix Z = random_matrix(4, 4, rng);
  Matrix mask = Matrix::Zero(4, 4);
  for (Index l = 0; l < 5; ++l) mask(op.row_indices()[l], op.col_indices()[l]) = 1.0;
  Matrix oracle(4, 4);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) oracle(i, j) = mask(i, j) * Z(i, j);
  }
  EXPECT_EQ((op.adjoint(op.apply(Z)) - oracle).norm(), 0.0);
  EXPECT_EQ(mask.sum(), 5.0);
}

TEST(EntrySensingTest, IndicesDistinctAndInRange) {
  for (auto [m, n, p] : {std::tuple<Index, Index, Index>{30, 20, 200}, {7, 9, 63}, {50, 50, 1}}) {
    EntrySensing op(m, n, p, 123);
    std::set<std::pair<Index, Index>> seen;
    for (Index l = 0; l < p; ++l) {
      const Index i = op.row_indices()[l], j = op.col_indices()[l];
      EXPECT_GE(i, 0);
      EXPECT_LT(i, m);
      EXPECT_GE(j, 0);
      EXPECT_LT(j, n);
      seen.emplace(i, j);
    }
    EXPECT_EQ(Index(seen.size()), p);
  }
}

TEST(EntrySensingTest, RejectionSamplerForHugeIndexSpace) {
  // 4000 x 3000 exceeds the shuffle limit.
  EntrySensing op(4000, 3000, 500, 8);
  std::set<std::pair<Index, Index>> seen;
  for (Index l = 0; l < 500; ++l) seen.emplace(op.row_indices()[l], op.col_indices()[l]);
  EXPECT_EQ(seen.size(), 500u);
  EntrySensing again(4000, 3000, 500, 8);
  EXPECT_EQ(op.row_indices(), again.row_indices());
  EXPECT_EQ(op.col_indices(), again.col_indices());
}

TEST(EntrySensingTest, AdjointIdentity) {
  EntrySensing op(9, 7, 30, 3);
  Rng rng(7);
  expect_adjoint_identity(op, rng, 100);
}

TEST(EntrySensingTest, FactoredPathsAgreeWithDense) {
  EntrySensing op(9, 8, 40, 4);
  Rng rng(8);
  FactoredMatrix F{random_matrix(9, 3, rng), random_matrix(8, 3, rng)};
  EXPECT_LE((op.apply(F) - op.apply(F.dense())).norm(), 1e-12 * op.apply(F).norm());
  Vector v = random_matrix(40, 1, rng);
  Matrix U = random_matrix(9, 2, rng), V = random_matrix(8, 2, rng);
  Matrix A = op.adjoint(v);
  auto [GV, GtU] = op.adjoint_products(v, U, V);
  EXPECT_LE((GV - A * V).norm(), 1e-12 * GV.norm());
  EXPECT_LE((GtU - A.transpose() * U).norm(), 1e-12 * GtU.norm());
}

TEST(EntrySensingTest, SeedDeterminism) {
  EntrySensing a(20, 30, 100, 5), b(20, 30, 100, 5), c(20, 30, 100, 6);
  EXPECT_EQ(a.row_indices(), b.row_indices());
  EXPECT_EQ(a.col_indices(), b.col_indices());
  EXPECT_TRUE(a.row_indices() != c.row_indices() || a.col_indices() != c.col_indices());
}

TEST(SensingTest, Linearity) {
  Rng rng(10);
  GaussianSensing g(6, 7, 15, 1);
  EntrySensing e(6, 7, 15, 1);
  for (int t = 0; t < 20; ++t) {
    Matrix Z1 = random_matrix(6, 7, rng), Z2 = random_matrix(6, 7, rng);
    const double a = testing::uniform_real(-2, 2, rng), b = testing::uniform_real(-2, 2, rng);
    Vector lg = g.apply(a * Z1 + b * Z2), rg = a * g.apply(Z1) + b * g.apply(Z2);
    EXPECT_LE((lg - rg).norm(), 1e-12 * std::max(1.0, rg.norm()));
    Vector le = e.apply(a * Z1 + b * Z2), re = a * e.apply(Z1) + b * e.apply(Z2);
    EXPECT_LE((le - re).norm(), 1e-12 * std::max(1.0, re.norm()));
  }
}

TEST(SensingTest, DescriptorRoundTrip) {
  GaussianSensing g(5, 4, 9, 77);
  AnyOperator rebuilt = make_operator(g.descriptor());
  ASSERT_TRUE(std::holds_alternative<GaussianSensing>(rebuilt));
  Rng rng(1);
  Matrix Z = random_matrix(5, 4, rng);
  EXPECT_EQ((std::get<GaussianSensing>(rebuilt).apply(Z) - g.apply(Z)).norm(), 0.0);

  EntrySensing e(5, 4, 9, 77);
  AnyOperator re = make_operator(e.descriptor());
  ASSERT_TRUE(std::holds_alternative<EntrySensing>(re));
  EXPECT_EQ(std::get<EntrySensing>(re).row_indices(), e.row_indices());

  SensingDescriptor bad = g.descriptor();
  bad.scale = 0.5;
  EXPECT_THROW(make_operator(bad), ContractViolation);
}

TEST(RicEstimateTest, FullEntrySamplingIsIsometric) {
  EntrySensing op(6, 5, 30, 2);
  EXPECT_NEAR(estimate_ric_lower_bound(op, 3, 200, 1), 0.0, 1e-12);
}

TEST(RicEstimateTest, NondecreasingInRank) {
  GaussianSensing op(8, 8, 40, 3);
  double prev = 0.0;
  for (Index r = 1; r <= 4; ++r) {
    const double est = estimate_ric_lower_bound(op, r, 200, 11);
    EXPECT_GE(est, prev);
    prev = est;
  }
}

TEST(RicEstimateTest, CoversRankOneGridMaximum) {
  const Index p = 4;
  GaussianSensing op(2, 2, p, 21);
  // Every unit-norm rank-1 2x2 matrix is +-u(a) v(b)^T; the sign does not
  // change ||A(Z)||, so a in [0, pi), b in [0, 2 pi) covers the set.
  const int grid = 354;  // 354^2 ~ 50^3 points
  const double pi = std::acos(-1.0);
  double grid_max = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double a = pi * i / grid;
    for (int j = 0; j < grid; ++j) {
      const double b = 2.0 * pi * j / grid;
      Matrix Z(2, 2);
      Z << std::cos(a) * std::cos(b), std::cos(a) * std::sin(b),
           std::sin(a) * std::cos(b), std::sin(a) * std::sin(b);
      grid_max = std::max(grid_max, std::abs(op.apply(Z).squaredNorm() - 1.0));
    }
  }
  const double est = estimate_ric_lower_bound(op, 1, 1'000'000, 5);
  EXPECT_LE(grid_max, est + 5e-2);
  EXPECT_LE(est, grid_max + 5e-3);  // both approximate the same supremum
}

TEST(RicEstimateTest, RejectsBadArguments) {
  GaussianSensing op(3, 3, 5, 1);
  EXPECT_THROW(estimate_ric_lower_bound(op, 0, 10, 1), ContractViolation);
  EXPECT_THROW(estimate_ric_lower_bound(op, 4, 10, 1), ContractViolation);
  EXPECT_THROW(estimate_ric_lower_bound(op, 1, 0, 1), ContractViolation);
}

TEST(RestrictedOrthogonalityTest, SampledDiagnostic) {
  const Index m = 20, n = 20, r1 = 1, r2 = 1;
  const Index p = 6 * std::max(m, n) * (r1 + r2);
  GaussianSensing op(m, n, p, 31);
  auto diag = testing::restricted_orthogonality(op, r1, r2, 100, 10'000, 17);
  EXPECT_TRUE(diag.holds(0.15)) << diag.worst_ratio << " vs " << diag.ric_estimate;
}

}  // namespace
}  // namespace rlr
