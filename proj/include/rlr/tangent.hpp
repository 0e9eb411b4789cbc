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

#ifndef RLR_TANGENT_HPP_
#define RLR_TANGENT_HPP_

// Geometry of the rank-r matrix manifold at an iterate X = U diag(sigma) V^T.
//
// A tangent vector at (U, V) is stored in factored coordinates
//
//   T = U M V^T + Up V^T + U Vp^T,   U^T Up = 0,   V^T Vp = 0,
//
// with M r x r, Up m x r and Vp n x r. Every matrix of the tangent space has
// rank <= 2r, and X + T can be truncated back to rank r from the SVD of a
// 2r x 2r core instead of an m x n SVD (retract_fast).

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rlr/errors.hpp"
#include "rlr/matcore.hpp"
#include "rlr/sensing.hpp"

namespace rlr {

/// Which subspace S_l search directions are projected onto. ColumnOnly and
/// RowOnly keep the column (row) space of the iterate fixed forever and do
/// not converge to X in general; they exist to demonstrate that failure.
enum class Subspace { Tangent, ColumnOnly, RowOnly };

struct TangentSpace {
  Matrix U;      // m x r, orthonormal
  Matrix V;      // n x r, orthonormal
  Vector sigma;  // r singular values of the iterate (may be empty)

  Index rank() const { return U.cols(); }
  bool has_sigma() const { return sigma.size() == U.cols(); }

  /// The iterate U diag(sigma) V^T.
  Matrix point() const { return U * sigma.asDiagonal() * V.transpose(); }

  FactoredMatrix factored_point() const {
    return {U * sigma.asDiagonal(), V};
  }

  static TangentSpace from_svd(ThinSVD svd) {
    return {std::move(svd.U), std::move(svd.V), std::move(svd.S)};
  }
};

struct TangentVector {
  Matrix M;   // r x r
  Matrix Up;  // m x r, orthogonal to U
  Matrix Vp;  // n x r, orthogonal to V

  TangentVector& operator*=(double a) {
    M *= a;
    Up *= a;
    Vp *= a;
    return *this;
  }
};

inline TangentVector operator*(double a, TangentVector T) { return T *= a; }

inline TangentVector operator+(const TangentVector& A, const TangentVector& B) {
  return {A.M + B.M, A.Up + B.Up, A.Vp + B.Vp};
}

/// <A, B>_F for two tangent vectors at the same point; the three components
/// are mutually orthogonal.
inline double inner(const TangentVector& A, const TangentVector& B) {
  return frob_inner(A.M, B.M) + frob_inner(A.Up, B.Up) +
         frob_inner(A.Vp, B.Vp);
}

inline double squared_norm(const TangentVector& T) { return inner(T, T); }

/// T as left * right^T with 2r columns: [U M + Up, U] [V, Vp]^T.
inline FactoredMatrix factored(const TangentSpace& S, const TangentVector& T) {
  const Index m = S.U.rows(), n = S.V.rows(), r = S.rank();
  FactoredMatrix F{Matrix(m, 2 * r), Matrix(n, 2 * r)};
  F.left << S.U * T.M + T.Up, S.U;
  F.right << S.V, T.Vp;
  return F;
}

inline Matrix to_dense(const TangentSpace& S, const TangentVector& T) {
  return factored(S, T).dense();
}

namespace detail {

inline void check_space(const TangentSpace& S, Index m, Index n,
                        const char* where) {
  if (S.U.rows() != m || S.V.rows() != n || S.U.cols() != S.V.cols()) {
    throw ContractViolation(std::string(where) + ": tangent space " +
                            shape(S.U) + "/" + shape(S.V) +
                            " incompatible with " + std::to_string(m) + "x" +
                            std::to_string(n));
  }
}

}  // namespace detail

/// Projection of Z given only the products ZV = Z V (m x r) and ZtU = Z^T U
/// (n x r). This is how gradients A*(res) are projected without forming them.
inline TangentVector project_products(const TangentSpace& S, const Matrix& ZV,
                                      const Matrix& ZtU, Subspace sel) {
  const Index r = S.rank();
  TangentVector T;
  T.M = S.U.transpose() * ZV;
  switch (sel) {
    case Subspace::Tangent:
      T.Up = ZV - S.U * T.M;
      T.Vp = ZtU - S.V * T.M.transpose();
      break;
    case Subspace::ColumnOnly:  // U U^T Z
      T.Up = Matrix::Zero(S.U.rows(), r);
      T.Vp = ZtU - S.V * T.M.transpose();
      break;
    case Subspace::RowOnly:  // Z V V^T
      T.Up = ZV - S.U * T.M;
      T.Vp = Matrix::Zero(S.V.rows(), r);
      break;
  }
  return T;
}

inline TangentVector project_factored(const TangentSpace& S, const Matrix& Z,
                                      Subspace sel = Subspace::Tangent) {
  detail::check_space(S, Z.rows(), Z.cols(), "project");
  return project_products(S, Z * S.V, Z.transpose() * S.U, sel);
}

/// Projection of a matrix held as left * right^T; O((m+n) k r).
inline TangentVector project_factored(const TangentSpace& S,
                                      const FactoredMatrix& Z,
                                      Subspace sel = Subspace::Tangent) {
  detail::check_space(S, Z.left.rows(), Z.right.rows(), "project");
  return project_products(S, Z.left * (Z.right.transpose() * S.V),
                          Z.right * (Z.left.transpose() * S.U), sel);
}

/// P_S(Z):
///   Tangent     U U^T Z + Z V V^T - U U^T Z V V^T
///   ColumnOnly  U U^T Z
///   RowOnly     Z V V^T
inline Matrix project(const TangentSpace& S, const Matrix& Z,
                      Subspace sel = Subspace::Tangent) {
  detail::check_space(S, Z.rows(), Z.cols(), "project");
  const Matrix UtZ = S.U.transpose() * Z;
  switch (sel) {
    case Subspace::ColumnOnly:
      return S.U * UtZ;
    case Subspace::RowOnly:
      return (Z * S.V) * S.V.transpose();
    case Subspace::Tangent:
      break;
  }
  const Matrix ZV = Z * S.V;
  return S.U * UtZ + ZV * S.V.transpose() - S.U * (UtZ * S.V) * S.V.transpose();
}

namespace detail {

/// Restores orthonormal factors without changing U diag(sigma) V^T.
inline void reorthonormalize(TangentSpace& S) {
  const QRFactors qu = qr_thin(S.U);
  const QRFactors qv = qr_thin(S.V);
  const Matrix core = qu.R * S.sigma.asDiagonal() * qv.R.transpose();
  const ThinSVD svd = thin_svd(core, core.rows());
  S.U = qu.Q * svd.U;
  S.V = qv.Q * svd.V;
  S.sigma = svd.S;
}

}  // namespace detail

/// Orthonormality drift above which new factors are re-orthonormalized.
inline constexpr double kReorthTolerance = 1e-10;

/// H_r(X + T) for X = U diag(sigma) V^T and a tangent vector T at X.
///
/// With Up = Q2 R2 and Vp = Q1 R1 (thin QR),
///
///   X + T = [U Q2] [ diag(sigma) + M   R1^T ] [V Q1]^T
///                  [ R2                0    ]
///
/// so the truncation only needs the SVD of the 2r x 2r core. Rank-deficient
/// Up / Vp (zero rows in R) are fine: the corresponding core rows vanish.
inline TangentSpace retract_fast(const TangentSpace& S, const TangentVector& T,
                                 Index r) {
  if (!S.has_sigma()) {
    throw ContractViolation("retract_fast: tangent space carries no sigma");
  }
  const Index k = S.rank();
  if (r < 1 || r > 2 * k || r > std::min(S.U.rows(), S.V.rows())) {
    throw ContractViolation("retract_fast: target rank out of range");
  }
  // Re-impose U^T Up = 0 and V^T Vp = 0 against roundoff.
  const Matrix Up = T.Up - S.U * (S.U.transpose() * T.Up);
  const Matrix Vp = T.Vp - S.V * (S.V.transpose() * T.Vp);
  const QRFactors q2 = qr_thin(Up);
  const QRFactors q1 = qr_thin(Vp);

  Matrix core = Matrix::Zero(2 * k, 2 * k);
  core.topLeftCorner(k, k) = T.M;
  core.topLeftCorner(k, k).diagonal() += S.sigma;
  core.topRightCorner(k, k) = q1.R.transpose();
  core.bottomLeftCorner(k, k) = q2.R;
  const ThinSVD svd = thin_svd(core, r);

  TangentSpace out;
  out.U = S.U * svd.U.topRows(k) + q2.Q * svd.U.bottomRows(k);
  out.V = S.V * svd.V.topRows(k) + q1.Q * svd.V.bottomRows(k);
  out.sigma = svd.S;
  if (orthonormality_defect(out.U) > kReorthTolerance ||
      orthonormality_defect(out.V) > kReorthTolerance) {
    detail::reorthonormalize(out);
  }
  return out;
}

/// Dense-argument form: returns H_r(X + P_S(Z)) and its tangent space.
inline std::pair<Matrix, TangentSpace> retract_fast(const TangentSpace& S,
                                                    const Matrix& Z, Index r) {
  TangentSpace next = retract_fast(S, project_factored(S, Z), r);
  Matrix X = next.point();
  return {std::move(X), std::move(next)};
}

/// Reference retraction through a full m x n SVD (debug / oracle path).
inline TangentSpace retract_full_svd(const TangentSpace& S,
                                     const TangentVector& T, Index r) {
  return TangentSpace::from_svd(thin_svd(S.point() + to_dense(S, T), r));
}

/// Both sides of the projection-error inequalities for two rank-r matrices:
///
///   ||(I - P_S_l) X||_F <= ||X_l - X||_2 ||X_l - X||_F / sigma_min(X)
///                       <= ||X_l - X||_F^2 / sigma_min(X)
///
/// and the subspace distances
///
///   ||U_l U_l^T - U U^T||_2 <= ||X_l - X||_2 / sigma_min(X)
///   ||U_l U_l^T - U U^T||_F <= sqrt(2) ||X_l - X||_F / sigma_min(X)
///
/// (likewise for V).
struct ProjectionBounds {
  double residual = 0.0;           // ||(I - P_S_l) X||_F
  double spectral_bound = 0.0;     // ||X_l - X||_2 ||X_l - X||_F / s_min
  double frobenius_bound = 0.0;    // ||X_l - X||_F^2 / s_min
  double u_dist_2 = 0.0, v_dist_2 = 0.0;
  double u_dist_f = 0.0, v_dist_f = 0.0;
  double dist_bound_2 = 0.0;       // ||X_l - X||_2 / s_min
  double dist_bound_f = 0.0;       // sqrt(2) ||X_l - X||_F / s_min

  bool projection_holds(double slack = 1e-10) const {
    return residual <= spectral_bound + slack &&
           spectral_bound <= frobenius_bound + slack;
  }
  bool subspace_holds(double slack = 1e-10) const {
    return u_dist_2 <= dist_bound_2 + slack &&
           v_dist_2 <= dist_bound_2 + slack &&
           u_dist_f <= dist_bound_f + slack && v_dist_f <= dist_bound_f + slack;
  }
};

namespace detail {

inline double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
}

}  // namespace detail

inline ProjectionBounds projection_bounds(const Matrix& X_l, const Matrix& X,
                                          Index r) {
  if (X_l.rows() != X.rows() || X_l.cols() != X.cols()) {
    throw ContractViolation("projection_bounds: shape mismatch");
  }
  const ThinSVD sl = thin_svd(X_l, r);
  const ThinSVD sx = thin_svd(X, r);
  auto full_rank = [&](const ThinSVD& s, const Matrix& A) {
    return s.S(r - 1) > 1e-12 * std::max(A.norm(), kZeroFloor);
  };
  if (!full_rank(sl, X_l) || !full_rank(sx, X)) {
    throw ContractViolation("projection_bounds: inputs must have exact rank r");
  }
  const TangentSpace S{sl.U, sl.V, sl.S};
  const Matrix D = X_l - X;
  const double d2 = detail::spectral_norm(D);
  const double dF = D.norm();
  const double smin = sx.S(r - 1);

  ProjectionBounds b;
  b.residual = (X - project(S, X)).norm();
  b.spectral_bound = d2 * dF / smin;
  b.frobenius_bound = dF * dF / smin;
  const Matrix du = sl.U * sl.U.transpose() - sx.U * sx.U.transpose();
  const Matrix dv = sl.V * sl.V.transpose() - sx.V * sx.V.transpose();
  b.u_dist_2 = detail::spectral_norm(du);
  b.v_dist_2 = detail::spectral_norm(dv);
  b.u_dist_f = du.norm();
  b.v_dist_f = dv.norm();
  b.dist_bound_2 = d2 / smin;
  b.dist_bound_f = std::sqrt(2.0) * dF / smin;
  return b;
}

/// True when both forms of the projection-error inequality hold.
inline bool projection_error_bound_check(const Matrix& X_l, const Matrix& X,
                                         Index r, double slack = 1e-10) {
  return projection_bounds(X_l, X, r).projection_holds(slack);
}

}  // namespace rlr

#endif  // RLR_TANGENT_HPP_
