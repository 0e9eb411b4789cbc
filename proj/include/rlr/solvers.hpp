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

#ifndef RLR_SOLVERS_HPP_
#define RLR_SOLVERS_HPP_

// Iterative solvers for  min 1/2 ||y - A(Z)||^2  subject to rank(Z) = r.
//
//   NIHT          gradient step along A*(res), full SVD truncation
//   CGIHT         conjugate gradient variant of NIHT
//   RGrad         Riemannian gradient descent (tangent-space projection and
//                 the O(r^3) retraction)
//   RCG           Riemannian conjugate gradient
//   RCGRestarted  RCG with beta reset to 0 whenever the direction stops being
//                 gradient related (cosine > kappa1) or the gradient outgrows
//                 the transported direction (ratio > kappa2)
//   ASD           alternating steepest descent on f(L, R) = 1/2||y - A(LR)||^2
//
// All line searches are exact: the objective is quadratic along any line.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rlr/errors.hpp"
#include "rlr/matcore.hpp"
#include "rlr/sensing.hpp"
#include "rlr/tangent.hpp"

namespace rlr {

enum class Algorithm { NIHT, CGIHT, RGrad, RCG, RCGRestarted, ASD };

enum class BetaRule {
  ConjugateOrthogonal,  // A-conjugacy on the current subspace (default)
  FletcherReeves,
  PolakRibiere,
  PolakRibierePlus,
};

enum class SolverStatus { Converged, MaxIters, Stalled };

inline constexpr std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::NIHT: return "niht";
    case Algorithm::CGIHT: return "cgiht";
    case Algorithm::RGrad: return "rgrad";
    case Algorithm::RCG: return "rcg";
    case Algorithm::RCGRestarted: return "rcg-restarted";
    case Algorithm::ASD: return "asd";
  }
  return "?";
}

inline constexpr std::string_view to_string(BetaRule b) {
  switch (b) {
    case BetaRule::ConjugateOrthogonal: return "conjugate-orthogonal";
    case BetaRule::FletcherReeves: return "fr";
    case BetaRule::PolakRibiere: return "pr";
    case BetaRule::PolakRibierePlus: return "pr-plus";
  }
  return "?";
}

inline constexpr std::string_view to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::MaxIters: return "max_iters";
    case SolverStatus::Stalled: return "stalled";
  }
  return "?";
}

inline constexpr std::string_view to_string(Subspace s) {
  switch (s) {
    case Subspace::Tangent: return "tangent";
    case Subspace::ColumnOnly: return "column";
    case Subspace::RowOnly: return "row";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::NIHT, Algorithm::CGIHT, Algorithm::RGrad,
                      Algorithm::RCG, Algorithm::RCGRestarted, Algorithm::ASD}) {
    if (s == to_string(a)) return a;
  }
  return std::nullopt;
}

inline std::optional<BetaRule> parse_beta_rule(std::string_view s) {
  for (BetaRule b : {BetaRule::ConjugateOrthogonal, BetaRule::FletcherReeves,
                     BetaRule::PolakRibiere, BetaRule::PolakRibierePlus}) {
    if (s == to_string(b)) return b;
  }
  return std::nullopt;
}

inline std::optional<Subspace> parse_subspace(std::string_view s) {
  for (Subspace x : {Subspace::Tangent, Subspace::ColumnOnly, Subspace::RowOnly}) {
    if (s == to_string(x)) return x;
  }
  return std::nullopt;
}

inline constexpr bool is_riemannian(Algorithm a) {
  return a == Algorithm::RGrad || a == Algorithm::RCG ||
         a == Algorithm::RCGRestarted;
}

struct SolverConfig {
  Algorithm algorithm = Algorithm::RGrad;
  Index rank = 1;
  /// RCG / RCGRestarted only; unset means ConjugateOrthogonal.
  std::optional<BetaRule> beta_rule;
  double kappa1 = 0.1;
  double kappa2 = 1.0;
  Index max_iters = 5000;
  double rel_residual_tol = 1e-9;
  /// NIHT iterations run before switching to the selected algorithm.
  Index warm_start_niht_iters = 0;
  /// Stop as Stalled when rel_residual improved by less than
  /// stall_tol * (its value stall_window iterations ago). 0 disables.
  Index stall_window = 50;
  double stall_tol = 1e-14;
  Subspace subspace = Subspace::Tangent;
  /// Truncate through a full m x n SVD instead of the 2r x 2r core.
  bool full_svd_retraction = false;
  std::uint64_t seed = 0;

  BetaRule effective_beta_rule() const {
    return beta_rule.value_or(BetaRule::ConjugateOrthogonal);
  }

  void validate() const {
    if (rank < 1) throw ConfigError("rank", "must be >= 1");
    if (!(kappa1 >= 0.0 && kappa1 < 1.0)) {
      throw ConfigError("kappa1", "must lie in [0, 1)");
    }
    if (!(kappa2 >= 1.0)) throw ConfigError("kappa2", "must be >= 1");
    if (max_iters < 0) throw ConfigError("max_iters", "must be >= 0");
    if (!(rel_residual_tol > 0.0)) {
      throw ConfigError("rel_residual_tol", "must be positive");
    }
    if (warm_start_niht_iters < 0) {
      throw ConfigError("warm_start_niht_iters", "must be >= 0");
    }
    if (stall_window < 0) throw ConfigError("stall_window", "must be >= 0");
    if (!(stall_tol > 0.0)) throw ConfigError("stall_tol", "must be positive");
    if (beta_rule && algorithm != Algorithm::RCG &&
        algorithm != Algorithm::RCGRestarted) {
      throw ConfigError("beta_rule", "only applies to rcg and rcg-restarted, not " +
                                         std::string(to_string(algorithm)));
    }
    if (subspace != Subspace::Tangent && !is_riemannian(algorithm)) {
      throw ConfigError("subspace", "only applies to rgrad, rcg, rcg-restarted");
    }
    if (full_svd_retraction && !is_riemannian(algorithm)) {
      throw ConfigError("full_svd_retraction",
                        "only applies to rgrad, rcg, rcg-restarted");
    }
  }
};

struct IterationRecord {
  Index iter = 0;
  double rel_residual = 0.0;  // ||y - A(X_l)|| / ||y||
  double alpha = 0.0;
  double beta = 0.0;
  bool restarted = false;
  std::optional<double> rel_error;  // ||X_l - X||_F / ||X||_F
  Index applications = 0;           // cumulative A / A* evaluations
};

struct SolverTrace {
  std::vector<IterationRecord> records;
  SolverStatus status = SolverStatus::MaxIters;

  Index iterations() const {
    return records.empty() ? 0 : records.back().iter;
  }
  double final_rel_residual() const {
    return records.empty() ? 0.0 : records.back().rel_residual;
  }
  Index applications() const {
    return records.empty() ? 0 : records.back().applications;
  }
};

struct SolveResult {
  Matrix X;
  SolverTrace trace;
};

/// Counts operator evaluations (one per apply, adjoint or adjoint product).
struct ApplyCounter {
  Index count = 0;
};

/// State of the hard-thresholding and Riemannian solvers.
struct Iterate {
  TangentSpace point;  // X_l = U diag(sigma) V^T
  Vector residual;     // y - A(X_l)

  /// Previous search direction P_{l-1} (Riemannian), as an ambient matrix in
  /// factored form; unset means P_{-1} = 0.
  std::optional<FactoredMatrix> direction;
  /// Previous projected gradient, kept for the FR / PR rules.
  std::optional<FactoredMatrix> gradient;
  double gradient_norm_sq = 0.0;
  /// Previous search direction of CGIHT; empty means P_{-1} = 0.
  Matrix dense_direction;

  Matrix dense() const { return point.point(); }
  Index rank() const { return point.rank(); }
};

struct StepResult {
  Iterate next;
  double alpha = 0.0;
  double beta = 0.0;
  bool restarted = false;
  /// The search direction was annihilated by A (or vanished); no step taken.
  bool stalled = false;
};

namespace detail {

template <SensingOperator Op>
Vector residual_at(const Op& op, const Vector& y, const TangentSpace& S,
                   ApplyCounter& counter) {
  ++counter.count;
  Vector res = y - op.apply(S.factored_point());
  if (!res.allFinite()) throw BackendError("solver: non-finite residual");
  return res;
}

/// Denominators below this fraction of the squared residual norm count as
/// zero.
inline constexpr double kDenominatorFloor = 1e-14;

inline StepResult stalled_step(const Iterate& it) {
  StepResult out{it};
  out.stalled = true;
  return out;
}

inline TangentSpace retract(const TangentSpace& S, const TangentVector& T,
                            Index r, bool full_svd) {
  return full_svd ? retract_full_svd(S, T, r) : retract_fast(S, T, r);
}

}  // namespace detail

/// X_0 = H_r(A*(y)) with its tangent space and residual.
template <SensingOperator Op>
Iterate init_hard_threshold(const Op& op, const Vector& y, Index r,
                            ApplyCounter& counter) {
  if (r < 1 || r > std::min(op.rows(), op.cols())) {
    throw ContractViolation("init_hard_threshold: rank out of range");
  }
  ++counter.count;
  Iterate it;
  it.point = TangentSpace::from_svd(thin_svd(op.adjoint(y), r));
  it.residual = detail::residual_at(op, y, it.point, counter);
  return it;
}

template <SensingOperator Op>
Iterate init_hard_threshold(const Op& op, const Vector& y, Index r) {
  ApplyCounter counter;
  return init_hard_threshold(op, y, r, counter);
}

/// Projected gradient P_S(A*(res)) at the current iterate.
template <SensingOperator Op>
TangentVector projected_gradient(const Op& op, const Iterate& it, Subspace sel,
                                 ApplyCounter& counter) {
  ++counter.count;
  auto [GV, GtU] = op.adjoint_products(it.residual, it.point.U, it.point.V);
  return project_products(it.point, GV, GtU, sel);
}

/// Riemannian gradient descent step:
///   G = A*(res),  alpha = ||P_S G||^2 / ||A P_S G||^2,
///   X+ = H_r(X + alpha P_S G)  through the 2r x 2r core.
template <SensingOperator Op>
StepResult step_rgrad(const Iterate& it, const Op& op, const Vector& y,
                      ApplyCounter& counter, Subspace sel = Subspace::Tangent,
                      bool full_svd = false) {
  const TangentSpace& S = it.point;
  TangentVector PG = projected_gradient(op, it, sel, counter);
  const double gnorm2 = squared_norm(PG);
  ++counter.count;
  const Vector APG = op.apply(factored(S, PG));
  const double denom = APG.squaredNorm();
  if (gnorm2 <= 0.0 || denom <= 0.0) return detail::stalled_step(it);

  StepResult out;
  out.alpha = gnorm2 / denom;
  out.restarted = true;
  out.next.point = detail::retract(S, out.alpha * PG, S.rank(), full_svd);
  out.next.residual = detail::residual_at(op, y, out.next.point, counter);
  return out;
}

/// Restart test of the restarted RCG. Returns true (keep the conjugate
/// direction) iff
///   |<P_S G, P_S P>| <= kappa1 ||P_S G|| ||P_S P||   and
///   ||P_S G|| <= kappa2 ||P_S P||,
/// and false when the transported direction is zero.
inline bool restart_check(const TangentVector& PG, const TangentVector& PP,
                          double kappa1, double kappa2) {
  const double pnorm = std::sqrt(squared_norm(PP));
  if (pnorm == 0.0) return false;
  const double gnorm = std::sqrt(squared_norm(PG));
  if (gnorm == 0.0) return true;
  const double cosine = std::abs(inner(PG, PP)) / (gnorm * pnorm);
  return cosine <= kappa1 && gnorm <= kappa2 * pnorm;
}

struct RestartPolicy {
  bool enabled = false;
  double kappa1 = 0.1;
  double kappa2 = 1.0;
};

/// Riemannian conjugate gradient step:
///   P = P_S G + beta P_S(P_prev),
///   alpha = <P_S G, P> / ||A P||^2,  X+ = H_r(X + alpha P).
template <SensingOperator Op>
StepResult step_rcg(const Iterate& it, const Op& op, const Vector& y,
                    ApplyCounter& counter,
                    BetaRule rule = BetaRule::ConjugateOrthogonal,
                    RestartPolicy restart = {},
                    Subspace sel = Subspace::Tangent, bool full_svd = false) {
  const TangentSpace& S = it.point;
  const double floor = detail::kDenominatorFloor * it.residual.squaredNorm();
  TangentVector PG = projected_gradient(op, it, sel, counter);
  const double gnorm2 = squared_norm(PG);

  StepResult out;
  Vector APG;
  Vector AP;
  TangentVector P;
  if (!it.direction) {
    ++counter.count;
    APG = op.apply(factored(S, PG));
    out.beta = 0.0;
    out.restarted = true;
    P = PG;
    AP = APG;
  } else {
    const TangentVector PP = project_factored(S, *it.direction, sel);
    counter.count += 2;
    auto [apg, app] = op.apply_pair(factored(S, PG), factored(S, PP));
    APG = std::move(apg);
    if (restart.enabled &&
        !restart_check(PG, PP, restart.kappa1, restart.kappa2)) {
      out.restarted = true;
    } else {
      switch (rule) {
        case BetaRule::ConjugateOrthogonal: {
          const double d = app.squaredNorm();
          if (d > floor) out.beta = -APG.dot(app) / d;
          else out.restarted = true;
          break;
        }
        case BetaRule::FletcherReeves:
          if (it.gradient_norm_sq > floor) out.beta = gnorm2 / it.gradient_norm_sq;
          else out.restarted = true;
          break;
        case BetaRule::PolakRibiere:
        case BetaRule::PolakRibierePlus: {
          if (it.gradient_norm_sq > floor && it.gradient) {
            const TangentVector prev = project_factored(S, *it.gradient, sel);
            out.beta = (gnorm2 - inner(PG, prev)) / it.gradient_norm_sq;
            if (rule == BetaRule::PolakRibierePlus) out.beta = std::max(out.beta, 0.0);
          } else {
            out.restarted = true;
          }
          break;
        }
      }
    }
    P = PG + out.beta * PP;
    AP = APG + out.beta * app;
  }

  const double denom = AP.squaredNorm();
  const double num = inner(PG, P);
  if (gnorm2 <= 0.0 || denom <= 0.0) return detail::stalled_step(it);
  out.alpha = num / denom;
  out.next.point = detail::retract(S, out.alpha * P, S.rank(), full_svd);
  out.next.residual = detail::residual_at(op, y, out.next.point, counter);
  out.next.direction = factored(S, P);
  out.next.gradient = factored(S, PG);
  out.next.gradient_norm_sq = gnorm2;
  return out;
}

/// NIHT step: alpha = ||U U^T G||^2 / ||A U U^T G||^2, X+ = H_r(X + alpha G)
/// through a full SVD (the update leaves every low-dimensional subspace).
template <SensingOperator Op>
StepResult step_niht(const Iterate& it, const Op& op, const Vector& y,
                     ApplyCounter& counter) {
  const TangentSpace& S = it.point;
  ++counter.count;
  const Matrix G = op.adjoint(it.residual);
  const FactoredMatrix PUG{S.U, G.transpose() * S.U};  // U U^T G
  const double num = PUG.right.squaredNorm();
  ++counter.count;
  const double denom = op.apply(PUG).squaredNorm();
  if (num <= 0.0 || denom <= 0.0) return detail::stalled_step(it);

  StepResult out;
  out.alpha = num / denom;
  out.restarted = true;
  out.next.point = TangentSpace::from_svd(thin_svd(it.dense() + out.alpha * G, S.rank()));
  out.next.residual = detail::residual_at(op, y, out.next.point, counter);
  return out;
}

/// CGIHT step: P = G + beta P_prev with beta making U U^T P A-conjugate to
/// U U^T P_prev; alpha = <U U^T G, U U^T P> / ||A U U^T P||^2.
template <SensingOperator Op>
StepResult step_cgiht(const Iterate& it, const Op& op, const Vector& y,
                      ApplyCounter& counter) {
  const TangentSpace& S = it.point;
  const double floor = detail::kDenominatorFloor * it.residual.squaredNorm();
  ++counter.count;
  const Matrix G = op.adjoint(it.residual);
  const FactoredMatrix PUG{S.U, G.transpose() * S.U};

  StepResult out;
  Matrix P;
  Vector APUP;
  FactoredMatrix PUP;
  if (it.dense_direction.size() == 0) {
    ++counter.count;
    APUP = op.apply(PUG);
    P = G;
    PUP = PUG;
    out.restarted = true;
  } else {
    const FactoredMatrix PUprev{S.U, it.dense_direction.transpose() * S.U};
    counter.count += 2;
    auto [apug, apuprev] = op.apply_pair(PUG, PUprev);
    const double d = apuprev.squaredNorm();
    if (d > floor) out.beta = -apug.dot(apuprev) / d;
    else out.restarted = true;
    P = G + out.beta * it.dense_direction;
    APUP = apug + out.beta * apuprev;
    PUP = FactoredMatrix{S.U, PUG.right + out.beta * PUprev.right};
  }
  const double num = frob_inner(PUG.right, PUP.right);
  const double denom = APUP.squaredNorm();
  if (PUG.right.squaredNorm() <= 0.0 || denom <= 0.0) {
    return detail::stalled_step(it);
  }
  out.alpha = num / denom;
  out.next.point = TangentSpace::from_svd(thin_svd(it.dense() + out.alpha * P, S.rank()));
  out.next.residual = detail::residual_at(op, y, out.next.point, counter);
  out.next.dense_direction = std::move(P);
  return out;
}

/// Factor pair of the alternating steepest descent baseline, X = L R.
struct AsdIterate {
  Matrix L;        // m x r
  Matrix R;        // r x n
  Vector residual; // y - A(L R)

  Matrix dense() const { return L * R; }
};

struct AsdStepResult {
  AsdIterate next;
  double step_L = 0.0;
  double step_R = 0.0;
};

/// Balanced factors L = U sqrt(S), R = sqrt(S) V^T of a rank-r iterate.
inline AsdIterate asd_from_point(const TangentSpace& S, Vector residual) {
  const Vector root = S.sigma.cwiseSqrt();
  return {S.U * root.asDiagonal(), root.asDiagonal() * S.V.transpose(),
          std::move(residual)};
}

/// One ASD iteration: exact steepest descent on L with R fixed, then on R
/// with the updated L.
template <SensingOperator Op>
AsdStepResult step_asd(const AsdIterate& it, const Op& op, const Vector& y,
                       ApplyCounter& counter) {
  AsdStepResult out{it};
  AsdIterate& s = out.next;
  const Matrix Rt0 = s.R.transpose();

  ++counter.count;
  const Matrix grad_L = -op.adjoint_mul(s.residual, Rt0);  // -A*(res) R^T
  ++counter.count;
  const Vector AgL = op.apply(FactoredMatrix{grad_L, Rt0});
  if (const double d = AgL.squaredNorm(); d > 0.0) {
    out.step_L = grad_L.squaredNorm() / d;
    s.L -= out.step_L * grad_L;
    s.residual += out.step_L * AgL;
  }

  ++counter.count;
  const Matrix grad_Rt = -op.adjoint_tmul(s.residual, s.L);  // (-L^T A*(res))^T
  ++counter.count;
  const Vector AgR = op.apply(FactoredMatrix{s.L, grad_Rt});
  if (const double d = AgR.squaredNorm(); d > 0.0) {
    out.step_R = grad_Rt.squaredNorm() / d;
    s.R -= out.step_R * grad_Rt.transpose();
    s.residual += out.step_R * AgR;
  }

  ++counter.count;
  s.residual = y - op.apply(FactoredMatrix{s.L, s.R.transpose()});
  if (!s.residual.allFinite()) throw BackendError("asd: non-finite residual");
  return out;
}

namespace detail {

/// Shared bookkeeping of the driver: records, tolerance and stall tests.
class TraceRecorder {
 public:
  TraceRecorder(const SolverConfig& cfg, const Vector& y, const Matrix* truth)
      : cfg_(cfg), ynorm_(y.norm()), truth_(truth) {}

  /// Appends a record; returns the status that ends the run, if any.
  std::optional<SolverStatus> record(Index iter, const Vector& residual,
                                     const Matrix* X_dense, double alpha,
                                     double beta, bool restarted,
                                     const ApplyCounter& counter) {
    IterationRecord rec;
    rec.iter = iter;
    const double rnorm = residual.norm();
    rec.rel_residual = ynorm_ > 0.0 ? rnorm / ynorm_ : rnorm;
    rec.alpha = alpha;
    rec.beta = beta;
    rec.restarted = restarted;
    rec.applications = counter.count;
    if (truth_ && X_dense) rec.rel_error = relative_frob_error(*X_dense, *truth_);
    trace_.records.push_back(rec);

    if (rec.rel_residual <= cfg_.rel_residual_tol) return SolverStatus::Converged;
    const auto& r = trace_.records;
    const auto w = static_cast<std::size_t>(cfg_.stall_window);
    if (w > 0 && r.size() > w) {
      const double before = r[r.size() - 1 - w].rel_residual;
      if (before - rec.rel_residual < cfg_.stall_tol * before) {
        return SolverStatus::Stalled;
      }
    }
    return std::nullopt;
  }

  bool wants_dense() const { return truth_ != nullptr; }
  SolverTrace finish(SolverStatus s) {
    trace_.status = s;
    return std::move(trace_);
  }

 private:
  const SolverConfig& cfg_;
  double ynorm_;
  const Matrix* truth_;
  SolverTrace trace_;
};

}  // namespace detail

/// Runs the configured algorithm from X_0 = H_r(A*(y)), optionally after
/// `warm_start_niht_iters` NIHT iterations, until the relative residual drops
/// to `rel_residual_tol`, `max_iters` iterations pass, or progress stalls.
/// Relative errors are logged when `ground_truth` is given.
template <SensingOperator Op>
SolveResult solve(const Op& op, const Vector& y, const SolverConfig& cfg,
                  const Matrix* ground_truth = nullptr) {
  cfg.validate();
  if (y.size() != op.measurements()) {
    throw ContractViolation("solve: measurement vector length mismatch");
  }
  if (cfg.rank > std::min(op.rows(), op.cols())) {
    throw ConfigError("rank", "exceeds min(m, n)");
  }
  if (ground_truth && (ground_truth->rows() != op.rows() ||
                       ground_truth->cols() != op.cols())) {
    throw ContractViolation("solve: ground truth shape mismatch");
  }

  ApplyCounter counter;
  detail::TraceRecorder rec(cfg, y, ground_truth);
  Iterate it = init_hard_threshold(op, y, cfg.rank, counter);
  Index iter = 0;

  auto log = [&](const Vector& res, auto&& dense_fn, double a, double b,
                 bool restarted) {
    Matrix X;
    if (rec.wants_dense()) X = dense_fn();
    return rec.record(iter, res, rec.wants_dense() ? &X : nullptr, a, b,
                      restarted, counter);
  };
  auto it_dense = [&] { return it.dense(); };

  if (auto done = log(it.residual, it_dense, 0.0, 0.0, false)) {
    return {it.dense(), rec.finish(*done)};
  }

  for (Index k = 0; k < cfg.warm_start_niht_iters && iter < cfg.max_iters; ++k) {
    StepResult s = step_niht(it, op, y, counter);
    if (s.stalled) return {it.dense(), rec.finish(SolverStatus::Stalled)};
    it = std::move(s.next);
    ++iter;
    if (auto done = log(it.residual, it_dense, s.alpha, s.beta, s.restarted)) {
      return {it.dense(), rec.finish(*done)};
    }
  }

  if (cfg.algorithm == Algorithm::ASD) {
    AsdIterate a = asd_from_point(it.point, it.residual);
    auto a_dense = [&] { return a.dense(); };
    while (iter < cfg.max_iters) {
      AsdStepResult s = step_asd(a, op, y, counter);
      a = std::move(s.next);
      ++iter;
      if (auto done = log(a.residual, a_dense, s.step_L, s.step_R, false)) {
        return {a.dense(), rec.finish(*done)};
      }
    }
    return {a.dense(), rec.finish(SolverStatus::MaxIters)};
  }

  const RestartPolicy restart{cfg.algorithm == Algorithm::RCGRestarted,
                              cfg.kappa1, cfg.kappa2};
  while (iter < cfg.max_iters) {
    StepResult s;
    switch (cfg.algorithm) {
      case Algorithm::NIHT: s = step_niht(it, op, y, counter); break;
      case Algorithm::CGIHT: s = step_cgiht(it, op, y, counter); break;
      case Algorithm::RGrad:
        s = step_rgrad(it, op, y, counter, cfg.subspace, cfg.full_svd_retraction);
        break;
      case Algorithm::RCG:
      case Algorithm::RCGRestarted:
        s = step_rcg(it, op, y, counter, cfg.effective_beta_rule(), restart,
                     cfg.subspace, cfg.full_svd_retraction);
        break;
      case Algorithm::ASD: break;  // handled above
    }
    if (s.stalled) return {it.dense(), rec.finish(SolverStatus::Stalled)};
    it = std::move(s.next);
    ++iter;
    if (auto done = log(it.residual, it_dense, s.alpha, s.beta, s.restarted)) {
      return {it.dense(), rec.finish(*done)};
    }
  }
  return {it.dense(), rec.finish(SolverStatus::MaxIters)};
}

template <SensingOperator Op>
SolveResult solve(const Op& op, const Vector& y, const SolverConfig& cfg,
                  const Matrix& ground_truth) {
  return solve(op, y, cfg, &ground_truth);
}

/// Dispatch over a type-erased operator.
inline SolveResult solve(const AnyOperator& op, const Vector& y,
                         const SolverConfig& cfg,
                         const Matrix* ground_truth = nullptr) {
  return std::visit([&](const auto& o) { return solve(o, y, cfg, ground_truth); },
                    op);
}

}  // namespace rlr

#endif  // RLR_SOLVERS_HPP_
