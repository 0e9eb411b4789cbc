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

#ifndef RLR_SENSING_HPP_
#define RLR_SENSING_HPP_

// Linear measurement operators A: R^{m x n} -> R^p.
//
//   GaussianSensing  A(Z)_l = scale * <A_l, Z>, A_l with i.i.d. N(0,1) entries
//   EntrySensing     A(Z)_l = Z(i_l, j_l) for p distinct sampled positions
//
// Both are immutable after construction and regenerate their contents from a
// 64-bit seed, so an operator is fully described by a small descriptor.
//
// Besides apply/adjoint, each operator offers the factored products the
// solvers need: apply to a matrix given as L R^T without forming it, and
// A*(v) V / A*(v)^T U without forming A*(v) when the operator is sparse.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "rlr/errors.hpp"
#include "rlr/matcore.hpp"
#include "rlr/random.hpp"

namespace rlr {

enum class SensingKind { Gaussian, Entry };

inline constexpr std::string_view to_string(SensingKind k) {
  return k == SensingKind::Gaussian ? "gaussian" : "entry";
}

inline std::optional<SensingKind> parse_sensing(std::string_view s) {
  if (s == "gaussian") return SensingKind::Gaussian;
  if (s == "entry") return SensingKind::Entry;
  return std::nullopt;
}

/// Plain description of an operator; the operator is rebuilt from it.
struct SensingDescriptor {
  SensingKind kind = SensingKind::Gaussian;
  Index m = 0;
  Index n = 0;
  Index p = 0;
  std::uint64_t seed = 0;
  double scale = 1.0;  // Gaussian only; 1 for entry sensing

  bool operator==(const SensingDescriptor&) const = default;
};

/// A matrix held as left * right^T.
struct FactoredMatrix {
  Matrix left;   // m x k
  Matrix right;  // n x k

  Matrix dense() const { return left * right.transpose(); }
};

namespace detail {

inline void check_shape(const Matrix& Z, Index m, Index n, const char* where) {
  if (Z.rows() != m || Z.cols() != n) {
    throw ContractViolation(std::string(where) + ": expected " +
                            std::to_string(m) + "x" + std::to_string(n) +
                            ", got " + shape(Z));
  }
}

inline void check_length(const Vector& v, Index p, const char* where) {
  if (v.size() != p) {
    throw ContractViolation(std::string(where) + ": expected length " +
                            std::to_string(p) + ", got " +
                            std::to_string(v.size()));
  }
}

inline void check_dims(Index m, Index n, Index p, const char* where) {
  if (m < 1 || n < 1 || p < 1) {
    throw ContractViolation(std::string(where) +
                            ": m, n, p must all be positive");
  }
  if (p > m * n) {
    throw ContractViolation(std::string(where) + ": p=" + std::to_string(p) +
                            " exceeds m*n=" + std::to_string(m * n));
  }
}

inline void check_factors(const FactoredMatrix& F, Index m, Index n,
                          const char* where) {
  if (F.left.rows() != m || F.right.rows() != n ||
      F.left.cols() != F.right.cols()) {
    throw ContractViolation(std::string(where) + ": factor shapes " +
                            shape(F.left) + " / " + shape(F.right) +
                            " do not match " + std::to_string(m) + "x" +
                            std::to_string(n));
  }
}

}  // namespace detail

/// Dense Gaussian sensing. The p sensing matrices are stored already scaled,
/// one vectorized matrix per column of an (m*n) x p array.
class GaussianSensing {
 public:
  /// Normalized: scale 1/sqrt(p), so E||A(Z)||^2 = ||Z||_F^2 and the
  /// restricted isometry constant is meaningful. Raw: scale 1.
  enum class Scale { Normalized, Raw };

  GaussianSensing(Index m, Index n, Index p, std::uint64_t seed,
                  Scale scale = Scale::Normalized)
      : m_(m), n_(n), p_(p), seed_(seed) {
    detail::check_dims(m, n, p, "GaussianSensing");
    scale_ = scale == Scale::Normalized ? 1.0 / std::sqrt(double(p)) : 1.0;
    Rng rng(seed);
    matrices_ = gaussian_matrix(m * n, p, rng);
    if (scale_ != 1.0) matrices_ *= scale_;
  }

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Index measurements() const { return p_; }
  double scale() const { return scale_; }
  std::uint64_t seed() const { return seed_; }

  SensingDescriptor descriptor() const {
    return {SensingKind::Gaussian, m_, n_, p_, seed_, scale_};
  }

  /// scale * A_l as an m x n matrix.
  Eigen::Map<const Matrix> sensing_matrix(Index l) const {
    return Eigen::Map<const Matrix>(matrices_.col(l).data(), m_, n_);
  }

  Vector apply(const Matrix& Z) const {
    detail::check_shape(Z, m_, n_, "GaussianSensing::apply");
    return matrices_.transpose() *
           Eigen::Map<const Vector>(Z.data(), Z.size());
  }

  /// A(left * right^T).
  Vector apply(const FactoredMatrix& F) const {
    detail::check_factors(F, m_, n_, "GaussianSensing::apply");
    return apply(F.dense());
  }

  /// A applied to two matrices in one pass over the stored operator.
  std::pair<Vector, Vector> apply_pair(const Matrix& Z1,
                                       const Matrix& Z2) const {
    detail::check_shape(Z1, m_, n_, "GaussianSensing::apply_pair");
    detail::check_shape(Z2, m_, n_, "GaussianSensing::apply_pair");
    Matrix stacked(m_ * n_, 2);
    stacked.col(0) = Eigen::Map<const Vector>(Z1.data(), Z1.size());
    stacked.col(1) = Eigen::Map<const Vector>(Z2.data(), Z2.size());
    Matrix out = matrices_.transpose() * stacked;
    return {out.col(0), out.col(1)};
  }

  std::pair<Vector, Vector> apply_pair(const FactoredMatrix& F1,
                                       const FactoredMatrix& F2) const {
    return apply_pair(F1.dense(), F2.dense());
  }

  Matrix adjoint(const Vector& v) const {
    detail::check_length(v, p_, "GaussianSensing::adjoint");
    Vector flat = matrices_ * v;
    return Eigen::Map<const Matrix>(flat.data(), m_, n_);
  }

  /// A*(v) * V for V of size n x k.
  Matrix adjoint_mul(const Vector& v, const Matrix& V) const {
    return adjoint(v) * V;
  }

  /// A*(v)^T * U for U of size m x k.
  Matrix adjoint_tmul(const Vector& v, const Matrix& U) const {
    return adjoint(v).transpose() * U;
  }

  /// {A*(v) V, A*(v)^T U} from a single adjoint evaluation.
  std::pair<Matrix, Matrix> adjoint_products(const Vector& v, const Matrix& U,
                                             const Matrix& V) const {
    const Matrix G = adjoint(v);
    return {G * V, G.transpose() * U};
  }

 private:
  Index m_, n_, p_;
  std::uint64_t seed_;
  double scale_ = 1.0;
  Matrix matrices_;  // (m*n) x p
};

/// Entry sensing: observes p distinct entries sampled uniformly without
/// replacement. Measurements are ordered by column-major linear index, so
/// sampling every entry gives A(Z) = vec(Z).
class EntrySensing {
 public:
  /// Above this many entries the sampler switches from a partial
  /// Fisher-Yates shuffle to rejection sampling with a hash set.
  static constexpr Index kShuffleLimit = 10'000'000;

  EntrySensing(Index m, Index n, Index p, std::uint64_t seed)
      : m_(m), n_(n), p_(p), seed_(seed) {
    detail::check_dims(m, n, p, "EntrySensing");
    Rng rng(seed);
    const Index total = m * n;
    std::vector<Index> linear;
    if (total <= kShuffleLimit) {
      linear.resize(static_cast<std::size_t>(total));
      std::iota(linear.begin(), linear.end(), Index{0});
      for (Index i = 0; i < p; ++i) {
        std::uniform_int_distribution<Index> pick(i, total - 1);
        std::swap(linear[std::size_t(i)], linear[std::size_t(pick(rng))]);
      }
      linear.resize(static_cast<std::size_t>(p));
    } else {
      std::unordered_set<Index> seen;
      seen.reserve(static_cast<std::size_t>(p) * 2);
      std::uniform_int_distribution<Index> pick(0, total - 1);
      linear.reserve(static_cast<std::size_t>(p));
      while (Index(linear.size()) < p) {
        const Index k = pick(rng);
        if (seen.insert(k).second) linear.push_back(k);
      }
    }
    std::sort(linear.begin(), linear.end());
    row_.resize(linear.size());
    col_.resize(linear.size());
    for (std::size_t l = 0; l < linear.size(); ++l) {
      row_[l] = linear[l] % m;
      col_[l] = linear[l] / m;
    }
  }

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Index measurements() const { return p_; }
  double scale() const { return 1.0; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Index>& row_indices() const { return row_; }
  const std::vector<Index>& col_indices() const { return col_; }

  SensingDescriptor descriptor() const {
    return {SensingKind::Entry, m_, n_, p_, seed_, 1.0};
  }

  Vector apply(const Matrix& Z) const {
    detail::check_shape(Z, m_, n_, "EntrySensing::apply");
    Vector out(p_);
    for (Index l = 0; l < p_; ++l) out[l] = Z(row_[l], col_[l]);
    return out;
  }

  /// Gathers sampled entries of left * right^T in O(p k).
  Vector apply(const FactoredMatrix& F) const {
    detail::check_factors(F, m_, n_, "EntrySensing::apply");
    const Matrix Lt = F.left.transpose();
    const Matrix Rt = F.right.transpose();
    Vector out(p_);
    for (Index l = 0; l < p_; ++l) out[l] = Lt.col(row_[l]).dot(Rt.col(col_[l]));
    return out;
  }

  std::pair<Vector, Vector> apply_pair(const Matrix& Z1,
                                       const Matrix& Z2) const {
    return {apply(Z1), apply(Z2)};
  }

  std::pair<Vector, Vector> apply_pair(const FactoredMatrix& F1,
                                       const FactoredMatrix& F2) const {
    return {apply(F1), apply(F2)};
  }

  Matrix adjoint(const Vector& v) const {
    detail::check_length(v, p_, "EntrySensing::adjoint");
    Matrix out = Matrix::Zero(m_, n_);
    for (Index l = 0; l < p_; ++l) out(row_[l], col_[l]) = v[l];
    return out;
  }

  Matrix adjoint_mul(const Vector& v, const Matrix& V) const {
    detail::check_length(v, p_, "EntrySensing::adjoint_mul");
    if (V.rows() != n_) throw ContractViolation("EntrySensing::adjoint_mul: row mismatch");
    const Matrix Vt = V.transpose();
    Matrix outT = Matrix::Zero(V.cols(), m_);
    for (Index l = 0; l < p_; ++l) outT.col(row_[l]) += v[l] * Vt.col(col_[l]);
    return outT.transpose();
  }

  Matrix adjoint_tmul(const Vector& v, const Matrix& U) const {
    detail::check_length(v, p_, "EntrySensing::adjoint_tmul");
    if (U.rows() != m_) throw ContractViolation("EntrySensing::adjoint_tmul: row mismatch");
    const Matrix Ut = U.transpose();
    Matrix outT = Matrix::Zero(U.cols(), n_);
    for (Index l = 0; l < p_; ++l) outT.col(col_[l]) += v[l] * Ut.col(row_[l]);
    return outT.transpose();
  }

  std::pair<Matrix, Matrix> adjoint_products(const Vector& v, const Matrix& U,
                                             const Matrix& V) const {
    return {adjoint_mul(v, V), adjoint_tmul(v, U)};
  }

 private:
  Index m_, n_, p_;
  std::uint64_t seed_;
  std::vector<Index> row_;
  std::vector<Index> col_;
};

/// What the solvers require from a measurement operator.
template <typename Op>
concept SensingOperator = requires(const Op& op, const Matrix& Z,
                                   const FactoredMatrix& F, const Vector& v) {
  { op.rows() } -> std::convertible_to<Index>;
  { op.cols() } -> std::convertible_to<Index>;
  { op.measurements() } -> std::convertible_to<Index>;
  { op.apply(Z) } -> std::convertible_to<Vector>;
  { op.apply(F) } -> std::convertible_to<Vector>;
  { op.apply_pair(F, F) } -> std::convertible_to<std::pair<Vector, Vector>>;
  { op.adjoint(v) } -> std::convertible_to<Matrix>;
  { op.adjoint_mul(v, Z) } -> std::convertible_to<Matrix>;
  { op.adjoint_tmul(v, Z) } -> std::convertible_to<Matrix>;
  { op.adjoint_products(v, Z, Z) } -> std::convertible_to<std::pair<Matrix, Matrix>>;
  { op.descriptor() } -> std::convertible_to<SensingDescriptor>;
};

static_assert(SensingOperator<GaussianSensing>);
static_assert(SensingOperator<EntrySensing>);

using AnyOperator = std::variant<GaussianSensing, EntrySensing>;

/// Rebuilds an operator from its descriptor. Gaussian scale must be 1 or
/// 1/sqrt(p).
inline AnyOperator make_operator(const SensingDescriptor& d) {
  if (d.kind == SensingKind::Entry) return EntrySensing(d.m, d.n, d.p, d.seed);
  const double normalized = 1.0 / std::sqrt(double(d.p));
  if (std::abs(d.scale - 1.0) <= 1e-15) {
    return GaussianSensing(d.m, d.n, d.p, d.seed, GaussianSensing::Scale::Raw);
  }
  if (std::abs(d.scale - normalized) <= 1e-15 * std::max(1.0, normalized)) {
    return GaussianSensing(d.m, d.n, d.p, d.seed,
                           GaussianSensing::Scale::Normalized);
  }
  throw ContractViolation("make_operator: Gaussian scale must be 1 or 1/sqrt(p)");
}

/// Sampled LOWER bound on the restricted isometry constant R_r:
///
///   max over sampled unit-Frobenius Z with rank(Z) <= r of | ||A(Z)||^2 - 1 |
///
/// The true R_r is a supremum over all rank-r matrices and is not
/// computable in general; this value can be far below it and must never be
/// used as if it were R_r. Samples are drawn for every rank k = 1..r from
/// streams keyed by (seed, k, trial), so the sample set for r is contained in
/// the one for r+1 and the estimate is nondecreasing in r.
template <SensingOperator Op>
double estimate_ric_lower_bound(const Op& op, Index r, Index trials,
                                std::uint64_t seed) {
  const Index m = op.rows(), n = op.cols();
  if (r < 1 || r > std::min(m, n)) {
    throw ContractViolation("estimate_ric_lower_bound: rank out of range");
  }
  if (trials < 1) {
    throw ContractViolation("estimate_ric_lower_bound: trials must be >= 1");
  }
  double worst = 0.0;
  for (Index k = 1; k <= r; ++k) {
    for (Index t = 0; t < trials; ++t) {
      Rng rng(mix_seed({seed, std::uint64_t(k), std::uint64_t(t)}));
      FactoredMatrix Z{gaussian_matrix(m, k, rng), gaussian_matrix(n, k, rng)};
      const double norm = Z.dense().norm();
      if (norm == 0.0) continue;
      Z.left /= norm;
      worst = std::max(worst, std::abs(op.apply(Z).squaredNorm() - 1.0));
    }
  }
  return worst;
}

}  // namespace rlr

#endif  // RLR_SENSING_HPP_
