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

#ifndef RLR_THEORY_HPP_
#define RLR_THEORY_HPP_

// Recovery-guarantee constants for RGrad and (restarted) RCG, and the
// three-term contraction recurrence behind the RCG rate.
//
// Every function takes restricted isometry constants as inputs. True RICs
// are intractable; estimate_ric_lower_bound() only bounds them from below,
// so a report computed from estimates can refute a guarantee but never
// certify one.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rlr/errors.hpp"

namespace rlr {

struct GuaranteeInputs {
  double R2r = 0.0;
  double R3r = 0.0;
  double sigma_min = 1.0;
  double sigma_max = 1.0;
  double X_frob = 1.0;
  int r = 1;
  double kappa1 = 0.1;
  double kappa2 = 1.0;
  /// ||X_l - X||_F at the current iterate; enables the per-step factor.
  std::optional<double> current_error;

  void validate() const {
    auto bad = [](const char* field, const std::string& what) {
      throw DomainError(std::string(field) + ": " + what);
    };
    if (!(R2r >= 0.0 && R2r < 1.0)) bad("r2r", "must lie in [0, 1)");
    if (!(R3r >= 0.0 && R3r < 1.0)) bad("r3r", "must lie in [0, 1)");
    if (R2r > R3r) bad("r2r", "must not exceed r3r");
    if (!(sigma_min > 0.0)) bad("sigma_min", "must be positive");
    if (!(sigma_max >= sigma_min)) bad("sigma_max", "must be >= sigma_min");
    if (r < 1) bad("r", "must be >= 1");
    const double tol = 1e-12 * sigma_max;
    if (X_frob < sigma_max - tol) bad("x_frob", "must be >= sigma_max");
    if (X_frob > std::sqrt(static_cast<double>(r)) * sigma_max + tol) {
      bad("x_frob", "must be <= sqrt(r) * sigma_max");
    }
    if (!(kappa1 >= 0.0) || !(kappa2 >= 0.0)) bad("kappa", "must be nonnegative");
    if (current_error && !(*current_error >= 0.0)) {
      bad("current_error", "must be nonnegative");
    }
  }
};

struct GuaranteeReport {
  double gamma = 0.0;
  double mu = 0.0;
  // RCG only.
  std::optional<double> epsilon_alpha;
  std::optional<double> epsilon_beta;
  std::optional<double> tau1;
  std::optional<double> tau2;
  bool satisfied = false;  // gamma < 1
  /// Sufficient bound on R3r (relative to the inputs' condition number).
  double ric_sufficient = 0.0;
  /// Whether the inputs meet ric_sufficient.
  bool ric_condition_met = false;
  /// (4 R2r + 2 R3r) / (1 - R2r) + 2 ||X_l - X||_F / sigma_min.
  std::optional<double> per_step_factor;
};

namespace detail {

inline double rgrad_core(const GuaranteeInputs& in) {
  return (4.0 * in.R2r + 2.0 * in.R3r) / (1.0 - in.R2r);
}

inline void fill_common(const GuaranteeInputs& in, double divisor,
                        GuaranteeReport& rep) {
  rep.satisfied = rep.gamma < 1.0;
  rep.ric_sufficient = in.sigma_min / in.sigma_max /
                       (divisor * std::sqrt(static_cast<double>(in.r)));
  rep.ric_condition_met = in.R3r <= rep.ric_sufficient;
  if (in.current_error) {
    rep.per_step_factor = rgrad_core(in) + 2.0 * *in.current_error / in.sigma_min;
  }
}

}  // namespace detail

/// RGrad:  gamma = (4 R2r + 2 R3r)/(1 - R2r) + 4 R2r ||X||_F / sigma_min,
/// mu = gamma; sufficient R3r <= sigma_min / sigma_max / (12 sqrt(r)).
inline GuaranteeReport gamma_rgrad(const GuaranteeInputs& in) {
  in.validate();
  GuaranteeReport rep;
  rep.gamma = detail::rgrad_core(in) + 4.0 * in.R2r * in.X_frob / in.sigma_min;
  rep.mu = rep.gamma;
  detail::fill_common(in, 12.0, rep);
  return rep;
}

/// Restarted RCG:
///   eps_a = R2r / ((1 - R2r) - kappa1 (1 + R2r))
///   eps_b = kappa2 R2r / (1 - R2r) + kappa1 kappa2 / (1 - R2r)
///   tau1  = 2 (R2r + R3r)(1 + eps_a) + 2 eps_a + 4 R2r ||X||_F / sigma_min + eps_b
///   tau2  = 2 eps_b (1 + eps_a)(1 + R2r)
///   gamma = tau1 + tau2,  mu = (tau1 + sqrt(tau1^2 + 4 tau2)) / 2.
/// The sufficient bound R3r <= sigma_min / sigma_max / (25 sqrt(r)) is the
/// one stated for kappa1 = 0.1, kappa2 = 1.
inline GuaranteeReport gamma_rcg(const GuaranteeInputs& in) {
  in.validate();
  const double R2 = in.R2r;
  const double denom = (1.0 - R2) - in.kappa1 * (1.0 + R2);
  if (!(denom > 0.0)) {
    throw DomainError("gamma_rcg: (1 - R2r) - kappa1 (1 + R2r) must be positive");
  }
  const double ea = R2 / denom;
  const double eb = in.kappa2 * R2 / (1.0 - R2) + in.kappa1 * in.kappa2 / (1.0 - R2);
  const double t1 = 2.0 * (R2 + in.R3r) * (1.0 + ea) + 2.0 * ea +
                    4.0 * R2 * in.X_frob / in.sigma_min + eb;
  const double t2 = 2.0 * eb * (1.0 + ea) * (1.0 + R2);
  GuaranteeReport rep;
  rep.epsilon_alpha = ea;
  rep.epsilon_beta = eb;
  rep.tau1 = t1;
  rep.tau2 = t2;
  rep.gamma = t1 + t2;
  rep.mu = 0.5 * (t1 + std::sqrt(t1 * t1 + 4.0 * t2));
  detail::fill_common(in, 25.0, rep);
  return rep;
}

struct RecurrenceResult {
  double mu = 0.0;
  std::vector<double> c;      // c_0 .. c_steps, c_l = tau1 c_{l-1} + tau2 c_{l-2}
  std::vector<double> bound;  // mu^l c_0
  bool hypothesis = false;    // tau1 + tau2 < 1
  /// c_l <= mu^l c_0 (relative slack 1e-12) for all l. Reported false
  /// whenever the hypothesis fails.
  bool bound_holds = false;
};

/// Worst-case sequence of  c_l <= tau1 c_{l-1} + tau2 c_{l-2}  and the
/// geometric bound c_l <= mu^l c_0, mu = (tau1 + sqrt(tau1^2 + 4 tau2)) / 2.
inline RecurrenceResult recurrence_mu(double tau1, double tau2, double c0,
                                      double c1, int steps) {
  if (!(tau1 >= 0.0) || !(tau2 >= 0.0)) {
    throw DomainError("recurrence_mu: tau1, tau2 must be nonnegative");
  }
  if (!(c0 >= 0.0)) throw DomainError("recurrence_mu: c0 must be nonnegative");
  if (steps < 1) throw DomainError("recurrence_mu: steps must be >= 1");
  RecurrenceResult out;
  out.mu = 0.5 * (tau1 + std::sqrt(tau1 * tau1 + 4.0 * tau2));
  if (!(c1 >= 0.0) || c1 > out.mu * c0 * (1.0 + 1e-15)) {
    throw DomainError("recurrence_mu: need 0 <= c1 <= mu c0");
  }
  out.hypothesis = tau1 + tau2 < 1.0;
  out.c = {c0, c1};
  for (int l = 2; l <= steps; ++l) {
    out.c.push_back(tau1 * out.c[l - 1] + tau2 * out.c[l - 2]);
  }
  out.c.resize(static_cast<std::size_t>(steps) + 1);
  bool ok = true;
  double p = 1.0;
  for (int l = 0; l <= steps; ++l) {
    out.bound.push_back(p * c0);
    if (out.c[l] > out.bound[l] * (1.0 + 1e-12) + 1e-300) ok = false;
    p *= out.mu;
  }
  out.bound_holds = out.hypothesis && ok;
  return out;
}

/// max(m, n) r log(kappa sqrt(r)) with unit constant; an order of magnitude
/// for the number of measurements, nothing sharper.
inline double sampling_complexity(long m, long n, long r, double condition) {
  if (m < 1 || n < 1 || r < 1 || !(condition >= 1.0)) {
    throw DomainError("sampling_complexity: need m, n, r >= 1 and condition >= 1");
  }
  const double k = condition * std::sqrt(static_cast<double>(r));
  return static_cast<double>(std::max(m, n)) * static_cast<double>(r) *
         std::max(std::log(k), 1.0);
}

}  // namespace rlr

#endif  // RLR_THEORY_HPP_
