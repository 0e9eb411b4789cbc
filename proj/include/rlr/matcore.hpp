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

#ifndef RLR_MATCORE_HPP_
#define RLR_MATCORE_HPP_

// Dense linear-algebra primitives shared by the rest of the library. Every
// matrix is a column-major Eigen::MatrixXd; singular values are always
// returned in descending order.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "rlr/errors.hpp"

namespace rlr {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Absolute floor used when a tolerance is relative to a zero operand.
inline constexpr double kZeroFloor = 1e-14;

struct ThinSVD {
  Matrix U;  // m x k, orthonormal columns
  Vector S;  // k singular values, descending
  Matrix V;  // n x k, orthonormal columns

  Matrix reconstruct() const { return U * S.asDiagonal() * V.transpose(); }
};

struct QRFactors {
  Matrix Q;  // m x k, orthonormal columns
  Matrix R;  // k x k, upper triangular with nonnegative diagonal
};

namespace detail {

inline std::string shape(const Matrix& M) {
  std::ostringstream os;
  os << M.rows() << "x" << M.cols();
  return os.str();
}

inline void require_finite(const Matrix& M, const char* where) {
  if (!M.allFinite()) {
    throw ContractViolation(std::string(where) + ": non-finite entry in " +
                            shape(M) + " matrix");
  }
}

}  // namespace detail

/// Frobenius inner product <A, B> = trace(A^T B).
inline double frob_inner(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw ContractViolation("frob_inner: shape mismatch " + detail::shape(A) +
                            " vs " + detail::shape(B));
  }
  return (A.array() * B.array()).sum();
}

/// ||A - B||_F / max(||B||_F, kZeroFloor).
inline double relative_frob_error(const Matrix& A, const Matrix& B) {
  return (A - B).norm() / std::max(B.norm(), kZeroFloor);
}

/// Top-k singular triplets of M.
inline ThinSVD thin_svd(const Matrix& M, Index k) {
  const Index kmax = std::min(M.rows(), M.cols());
  if (k < 1 || k > kmax) {
    throw ContractViolation("thin_svd: k=" + std::to_string(k) +
                            " outside [1, " + std::to_string(kmax) + "] for " +
                            detail::shape(M));
  }
  detail::require_finite(M, "thin_svd");

  ThinSVD out;
  auto take = [&](const auto& svd) {
    if (svd.info() != Eigen::Success) {
      throw BackendError("thin_svd: SVD failed to converge on " +
                         detail::shape(M) + " matrix");
    }
    out.U = svd.matrixU().leftCols(k);
    out.S = svd.singularValues().head(k);
    out.V = svd.matrixV().leftCols(k);
  };
  // Jacobi is the more accurate choice for the small 2r x 2r cores the
  // retraction produces; divide-and-conquer for everything else.
  if (kmax <= 32) {
    take(Eigen::JacobiSVD<Matrix>(M, Eigen::ComputeThinU | Eigen::ComputeThinV));
  } else {
    take(Eigen::BDCSVD<Matrix>(M, Eigen::ComputeThinU | Eigen::ComputeThinV));
  }
  if (!out.U.allFinite() || !out.V.allFinite() || !out.S.allFinite()) {
    throw BackendError("thin_svd: non-finite factors for " + detail::shape(M));
  }
  return out;
}

/// Best rank-r approximation of M in the Frobenius norm (H_r). Ties among
/// repeated singular values keep the backend's first r triplets.
inline Matrix hard_threshold(const Matrix& M, Index r) {
  return thin_svd(M, r).reconstruct();
}

/// Thin Householder QR, signs normalized so that diag(R) >= 0. Rank-deficient
/// input yields (near-)zero diagonal entries in R; Q stays orthonormal.
inline QRFactors qr_thin(const Matrix& M) {
  if (M.rows() < M.cols()) {
    throw ContractViolation("qr_thin: needs rows >= cols, got " +
                            detail::shape(M));
  }
  detail::require_finite(M, "qr_thin");
  const Index k = M.cols();
  Eigen::HouseholderQR<Matrix> qr(M);
  QRFactors out;
  out.Q = qr.householderQ() * Matrix::Identity(M.rows(), k);
  out.R = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  for (Index j = 0; j < k; ++j) {
    if (out.R(j, j) < 0.0) {
      out.Q.col(j) *= -1.0;
      out.R.row(j) *= -1.0;
    }
  }
  return out;
}

/// max |A^T A - I| entry, a cheap orthonormality diagnostic.
inline double orthonormality_defect(const Matrix& A) {
  if (A.cols() == 0) return 0.0;
  return (A.transpose() * A - Matrix::Identity(A.cols(), A.cols()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace rlr

#endif  // RLR_MATCORE_HPP_
