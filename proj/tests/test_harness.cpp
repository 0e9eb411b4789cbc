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
#include <cstdlib>
#include <set>

#include <gtest/gtest.h>

#include "rlr/rlr.hpp"
#include "test_support.hpp"

namespace rlr {
namespace {

ProblemSpec small_spec(Index r, std::uint64_t seed) {
  ProblemSpec s;
  s.m = 40;
  s.n = 40;
  s.r = r;
  s.inv_rho = 3.0;
  s.seed = seed;
  return s;
}

TEST(RatiosTest, Identities) {
  EXPECT_DOUBLE_EQ(undersampling_ratio(80, 80, 640), 0.1);
  EXPECT_DOUBLE_EQ(oversampling_ratio(80, 80, 3, 640), 157.0 * 3.0 / 640.0);
  // rho * p = (m + n - r) r and delta * m n = p.
  for (Index p : {10, 100, 1000}) {
    EXPECT_NEAR(oversampling_ratio(30, 40, 5, p) * double(p), 65.0 * 5.0, 1e-9);
    EXPECT_NEAR(undersampling_ratio(30, 40, p) * 1200.0, double(p), 1e-9);
  }
}

TEST(ProblemSpecTest, MeasurementCount) {
  ProblemSpec s;
  s.m = 80;
  s.n = 80;
  s.r = 3;
  s.delta = 0.1;
  EXPECT_EQ(s.measurements(), 640);
  s.delta.reset();
  s.inv_rho = 2.0;
  EXPECT_EQ(s.measurements(), 2 * 157 * 3);
  s.p = 10;
  EXPECT_THROW(s.measurements(), ConfigError);
  s.inv_rho.reset();
  s.p = 6401;
  EXPECT_THROW(s.validate(), ConfigError);
  s.p = 100;
  s.r = 81;
  try {
    s.validate();
    FAIL() << "rank above min(m, n) accepted";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "r");
  }
}

TEST(GenerateProblemTest, RankDeterminismAndMeasurements) {
  const Problem a = generate_problem(small_spec(3, 7));
  const Problem b = generate_problem(small_spec(3, 7));
  const Problem c = generate_problem(small_spec(3, 8));
  EXPECT_EQ(a.X, b.X);
  EXPECT_EQ(a.y, b.y);
  EXPECT_GT((a.X - c.X).norm(), 1.0);
  const Vector s = testing::jacobi_singular_values(a.X);
  EXPECT_GT(s(2), 1e-8 * s(0));
  EXPECT_LE(s(3), 1e-12 * s(0));
  const Vector y = std::visit([&](const auto& op) { return op.apply(a.X); }, a.op);
  EXPECT_EQ(y, a.y);
}

TEST(GenerateProblemTest, TruthSeedOnlyMovesFactors) {
  ProblemSpec s = small_spec(2, 7);
  const Problem a = generate_problem(s);
  s.truth_seed = 99;
  const Problem b = generate_problem(s);
  EXPECT_GT((a.X - b.X).norm(), 1.0);
  const Vector yb = std::visit([&](const auto& op) { return op.apply(b.X); }, a.op);
  EXPECT_LE((yb - b.y).norm(), 1e-12 * b.y.norm());
}

TEST(GenerateProblemTest, SecondMomentMatchesFactorModel) {
  // E ||L R||_F^2 = m n r for standard Gaussian factors.
  const Index m = 40, n = 40, r = 3;
  double sum = 0.0;
  const int draws = 200;
  for (int k = 0; k < draws; ++k) {
    ProblemSpec s = small_spec(r, 1000 + k);
    s.sensing = SensingKind::Entry;
    sum += generate_problem(s).X.squaredNorm();
  }
  EXPECT_NEAR(sum / draws, double(m * n * r), 0.1 * double(m * n * r));
}

TEST(SuccessTest, Threshold) {
  Matrix X = Matrix::Ones(3, 3);
  EXPECT_TRUE(is_success(X, X));
  EXPECT_TRUE(is_success(X * (1.0 + 0.99e-2), X));
  EXPECT_FALSE(is_success(X * (1.0 + 1.01e-2), X));
  EXPECT_FALSE(is_success(Matrix::Zero(3, 3), X));
}

TrialRunner threshold_stub(Index r_ok, Index r_bad) {
  // Success below r_ok, failure from r_bad on, alternating in between.
  return [=](const ProblemSpec& s) {
    TrialOutcome t;
    t.seed = s.seed;
    if (s.r <= r_ok) t.success = true;
    else if (s.r >= r_bad) t.success = false;
    else t.success = (s.seed & 1u) != 0;
    return t;
  };
}

BracketOptions stub_options() {
  BracketOptions o;
  o.m = 20;
  o.n = 20;
  o.delta = 0.5;
  o.trials = 10;
  o.base_seed = 3;
  return o;
}

TEST(BracketTest, CapReachedLeavesUpperBoundOpen) {
  BracketOptions o = stub_options();
  o.r_cap = 5;
  PhaseRow row = bracket_rank(o, threshold_stub(100, 200));
  EXPECT_EQ(row.r_min, 5);
  EXPECT_FALSE(row.r_max.has_value());
  EXPECT_FALSE(row.rho_max.has_value());
}

TEST(BracketTest, SharpTransition) {
  for (Index start : {0, 1, 4, 12}) {
    BracketOptions o = stub_options();
    o.r_start = start;
    PhaseRow row = bracket_rank(o, threshold_stub(6, 7));
    EXPECT_EQ(row.r_min, 6) << start;
    ASSERT_TRUE(row.r_max.has_value());
    EXPECT_EQ(*row.r_max, 7);
    EXPECT_DOUBLE_EQ(row.rho_min, oversampling_ratio(20, 20, 6, 200));
    EXPECT_DOUBLE_EQ(*row.rho_max, oversampling_ratio(20, 20, 7, 200));
  }
}

TEST(BracketTest, MixedBandAndConsistency) {
  BracketOptions o = stub_options();
  PhaseRow row = bracket_rank(o, threshold_stub(3, 8));
  EXPECT_EQ(row.r_min, 3);
  ASSERT_TRUE(row.r_max.has_value());
  EXPECT_EQ(*row.r_max, 8);
  EXPECT_LT(row.r_min, *row.r_max);
  EXPECT_LE(row.rho_min, *row.rho_max);
  std::set<Index> seen;
  for (const PhaseCell& c : row.cells) {
    EXPECT_TRUE(seen.insert(c.r).second);
    EXPECT_EQ(c.trials, static_cast<Index>(c.outcomes.size()));
    if (c.r > 3 && c.r < 8) {
      EXPECT_FALSE(c.all_success());
      EXPECT_FALSE(c.all_fail());
    }
  }
}

TEST(BracketTest, EverythingFails) {
  BracketOptions o = stub_options();
  PhaseRow row = bracket_rank(o, threshold_stub(0, 1));
  EXPECT_EQ(row.r_min, 0);
  ASSERT_TRUE(row.r_max.has_value());
  EXPECT_EQ(*row.r_max, 1);
}

TEST(BracketTest, SeedsDependOnlyOnCellAndTrial) {
  BracketOptions o = stub_options();
  PhaseRow row = bracket_rank(o, threshold_stub(6, 7));
  for (const PhaseCell& c : row.cells) {
    for (const TrialOutcome& t : c.outcomes) {
      EXPECT_EQ(t.seed, trial_seed(o.base_seed, o.delta, c.r, t.trial));
    }
  }
  EXPECT_NE(trial_seed(3, 0.5, 4, 0), trial_seed(3, 0.55, 4, 0));
  EXPECT_NE(trial_seed(3, 0.5, 4, 0), trial_seed(3, 0.5, 5, 0));
  EXPECT_NE(trial_seed(3, 0.5, 4, 0), trial_seed(3, 0.5, 4, 1));
}

TEST(BracketTest, ThreadCountDoesNotChangeBrackets) {
  BracketOptions o = stub_options();
  o.threads = 1;
  PhaseRow a = bracket_rank(o, threshold_stub(3, 8));
  o.threads = 4;
  PhaseRow b = bracket_rank(o, threshold_stub(3, 8));
  EXPECT_EQ(a.r_min, b.r_min);
  EXPECT_EQ(a.r_max, b.r_max);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    EXPECT_EQ(a.cells[k].all_success(), b.cells[k].all_success());
    EXPECT_EQ(a.cells[k].all_fail(), b.cells[k].all_fail());
  }
}

TEST(BracketTest, SolverBackedSmallRow) {
  BracketOptions o;
  o.m = 20;
  o.n = 20;
  o.delta = 0.5;
  o.trials = 3;
  o.base_seed = 11;
  PhaseRow row = bracket_rank(o, Algorithm::RCG);
  EXPECT_EQ(row.algorithm, "rcg");
  EXPECT_GE(row.r_min, 1);
  ASSERT_TRUE(row.r_max.has_value());
  EXPECT_GT(*row.r_max, row.r_min);
  // No method recovers more unknowns than measurements.
  EXPECT_LE(row.rho_min, 1.0);
}

TEST(BracketTest, RejectsBadOptions) {
  BracketOptions o = stub_options();
  o.delta = 0.0;
  EXPECT_THROW(bracket_rank(o, threshold_stub(1, 2)), ConfigError);
  o = stub_options();
  o.trials = 0;
  EXPECT_THROW(bracket_rank(o, threshold_stub(1, 2)), ConfigError);
  o = stub_options();
  o.r_cap = 21;
  EXPECT_THROW(bracket_rank(o, threshold_stub(1, 2)), ConfigError);
}

TEST(DeltaGridTest, Values) {
  const auto g = default_delta_grid();
  ASSERT_EQ(g.size(), 18u);
  EXPECT_DOUBLE_EQ(g.front(), 0.1);
  EXPECT_NEAR(g.back(), 0.95, 1e-12);
}

TEST(ThreadsTest, Resolution) {
  EXPECT_EQ(resolve_threads(3), 3u);
  ::setenv("RLR_THREADS", "5", 1);
  EXPECT_EQ(resolve_threads(0), 5u);
  ::unsetenv("RLR_THREADS");
  EXPECT_EQ(resolve_threads(0), 1u);
}

TEST(CurveTest, MeanAndStd) {
  SolverTrace a, b;
  for (double v : {1.0, 0.5, 0.25}) a.records.push_back({.rel_residual = v});
  for (double v : {1.0, 0.7}) b.records.push_back({.rel_residual = v});
  const auto c = residual_curve({a, b});
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].count, 2);
  EXPECT_DOUBLE_EQ(c[0].stddev, 0.0);
  EXPECT_DOUBLE_EQ(c[1].mean, 0.6);
  EXPECT_NEAR(c[1].stddev, 0.1, 1e-15);
  EXPECT_EQ(c[2].count, 1);
  EXPECT_DOUBLE_EQ(c[2].mean, 0.25);
}

TEST(BenchmarkTest, SharedInstancesAndDeterminism) {
  ProblemSpec s = small_spec(2, 5);
  s.m = s.n = 25;
  const std::vector<Algorithm> algs = {Algorithm::RGrad, Algorithm::RCG};
  const BenchmarkResult a = convergence_benchmark(s, algs, 3);
  const BenchmarkResult b = convergence_benchmark(s, algs, 3, {}, 2);
  ASSERT_EQ(a.algorithms.size(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    ASSERT_EQ(a.algorithms[j].traces.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& ta = a.algorithms[j].traces[k];
      const auto& tb = b.algorithms[j].traces[k];
      ASSERT_EQ(ta.records.size(), tb.records.size());
      EXPECT_EQ(ta.final_rel_residual(), tb.final_rel_residual());
      EXPECT_EQ(ta.status, SolverStatus::Converged);
      ASSERT_TRUE(ta.records.back().rel_error.has_value());
    }
  }
  // Both algorithms start from the same instance, so iteration 0 agrees.
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(a.algorithms[0].traces[k].records[0].rel_residual,
              a.algorithms[1].traces[k].records[0].rel_residual);
  }
  EXPECT_EQ(a.algorithms[0].curve.size(), residual_curve(a.algorithms[0].traces).size());
}

}  // namespace
}  // namespace rlr
