/*
 Copyright 2026 The risklq Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "risklq/evaluation.hpp"
#include "risklq/model.hpp"

namespace risklq {

enum class RiskEval { kAnalytic, kMonteCarlo };

std::string_view to_string(RiskEval mode);
RiskEval risk_eval_from_string(std::string_view name);

struct DualOptions {
  double mu_max = 1.0;
  /// Bisection stops when mu_high - mu_low < tol_mu. Unset means
  /// 1e-3 * (1 + mu_high), re-evaluated every iteration.
  std::optional<double> tol_mu;
  double mu_cap = 1152921504606846976.0;  // 2^60
  RiskEval risk_eval = RiskEval::kAnalytic;
  /// Monte Carlo settings; the same seed is reused at every multiplier.
  McOptions mc;
  /// Monte Carlo feasibility is decided at J_R_hat + z * stderr.
  double z = 1.96;
  bool audit_monotonicity = true;
};

/// One risk evaluation along the search.
struct RiskSample {
  double mu = 0.0;
  double J_R = 0.0;
  double stderr_JR = 0.0;  ///< zero for analytic evaluation
  bool feasible = false;
};

struct BracketEntry {
  double mu_low = 0.0;
  double mu_high = 0.0;
  double mu_mid = 0.0;
  double J_R_mid = 0.0;
};

struct DualResult {
  double epsilon = 0.0;
  int horizon = 0;
  RiskEval risk_eval = RiskEval::kAnalytic;
  double mu_star = 0.0;
  std::vector<BracketEntry> bracket_history;
  std::vector<RiskSample> trail;  ///< every evaluation, in order
  double J_R_at_star = 0.0;
  double J_R_stderr = 0.0;
  double J_at_star = 0.0;     ///< quadratic cost of the policy at mu_star
  double J_stderr = 0.0;      ///< Monte Carlo mode only
  double Jbar_at_star = 0.0;  ///< analytic optimal augmented cost
  double dual_value = 0.0;    ///< Jbar_at_star - mu_star * epsilon
  double slackness = 0.0;     ///< mu_star * (J_R_at_star - epsilon)
  bool feasible = false;
  int evaluations = 0;
  double J_R_analytic_at_star = 0.0;
  std::optional<RiskCrossCheck> cross_check;  ///< Monte Carlo mode only
};

/// Smallest multiplier whose optimal policy meets the risk budget:
/// mu* = 0 when the unconstrained policy is feasible; otherwise mu_max is
/// doubled until feasible (InfeasibleWithinCap past mu_cap) and the bracket
/// is bisected. Returns the upper end of the final bracket. With
/// `audit_monotonicity`, throws MonotonicityViolation when the sampled risk
/// increases with mu beyond evaluation noise.
DualResult bisect_multiplier(const ValidatedModel& model, int horizon, double epsilon,
                             const DualOptions& options = {});

/// Throws MonotonicityViolation when some pair of samples shows J_R rising
/// with mu beyond round-off (plus three pooled standard errors in MC mode).
void audit_monotonicity(const std::vector<RiskSample>& trail, RiskEval mode);

struct CertificateOptions {
  double feasibility_tol = 1e-9;
  double slack_tol = 1e-2;
};

struct OptimalityCertificate {
  bool inner_solved = false;
  bool primal_feasible = false;
  double feasibility_margin = 0.0;  ///< epsilon - J_R
  double slackness_residual = 0.0;
  double slackness_bound = 0.0;
  bool slackness_holds = false;
  double dual_value = 0.0;
  double primal_value = 0.0;
  double duality_gap = 0.0;  ///< dual_value - primal_value
  bool zero_gap = false;

  bool passed() const {
    return inner_solved && primal_feasible && slackness_holds && zero_gap;
  }
};

/// Checks the optimality conditions at result.mu_star. Throws
/// CertificateFailed with subject "inner_minimization" or "feasibility" when
/// those fail; slackness and the gap are reported with flags because they
/// only hold up to the bisection resolution.
OptimalityCertificate duality_report(const ValidatedModel& model, const DualResult& result,
                                     const CertificateOptions& options = {});

}  // namespace risklq
