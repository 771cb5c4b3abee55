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

#include <cstdint>
#include <optional>
#include <vector>

#include "risklq/estimation.hpp"
#include "risklq/model.hpp"
#include "risklq/policy.hpp"
#include "risklq/riccati.hpp"
#include "risklq/simulate.hpp"

namespace risklq {

/// Optimal augmented cost split into the initial-condition term and one
/// trace term per step 0..N+1.
struct CostBreakdown {
  double mu = 0.0;
  double epsilon = 0.0;
  double initial_term = 0.0;
  std::vector<double> trace_terms;
  double total = 0.0;       ///< optimal augmented cost at mu
  double dual_value = 0.0;  ///< total - mu * epsilon
};

/// Expected initial quadratic
///   E[ x0'Z0 xR + x0'X0 (xL - xR) + x0'S0 E xR ]
/// at step 0, which equals x0_mean'(Z0 + S0) x0_mean + tr(Theta0 V0) with
/// V0 the covariance of the step-0 estimate correction.
double initial_cost_term(const ValidatedModel& model, const RiccatiSolution& solution,
                         const CovarianceSchedule& schedule);

/// Closed-form optimal augmented cost. Step terms are
///   C_k     = tr(Q_mu Sigma^L_{k|k}) + tr(Theta_{k+1} V_{k+1}),  k = 0..N
///   C_{N+1} = tr(G_mu Sigma^L_{N+1|N+1})
/// where V_k is the covariance of the estimate correction at step k.
/// Throws HorizonMismatch when the schedule length does not match.
CostBreakdown optimal_cost(const ValidatedModel& model, const RiccatiSolution& solution,
                           const CovarianceSchedule& schedule);

/// Backward risk recursion for the gain policy of `solution`:
///   O_k = Q_r + (A - B K_k)' O_{k+1} (A - B K_k)
///   P_k = Q_r + (A - B_L Gamma_k)' T_{k+1} (A - B_L Gamma_k)
///   W_k = -O_k
///   q_k = q_{k+1} + tr(Q_r Sigma^L_{k|k}) + tr(T_{k+1} V_{k+1})
/// with T = (1-p) O + p P, terminals O = P = Q_r, W = -Q_r,
/// q_{N+1} = tr(Q_r Sigma^L_{N+1|N+1}), and
///   J_R = tr(T_0 V_0) + q_0 + x0_mean'(O_0 + W_0) x0_mean.
struct RiskRecursion {
  std::vector<Matrix> O;
  std::vector<Matrix> P;
  std::vector<Matrix> W;
  std::vector<double> q;
  double J_R_analytic = 0.0;
};

RiskRecursion risk_value(const ValidatedModel& model, const RiccatiSolution& solution,
                         const CovarianceSchedule& schedule);
RiskRecursion risk_value(const ValidatedModel& model, const PolicySchedule& policy,
                         const CovarianceSchedule& schedule);

/// Exact second moments of an arbitrary gain policy, propagated forward.
/// The state deviation x - Ex splits into three uncorrelated parts:
/// local error (covariance Sigma^L_{k|k}), local-remote gap (D_k) and
/// remote estimate deviation (Rr_k).
struct PolicyMoments {
  std::vector<MeanState> mean_path;
  std::vector<Matrix> local_error;   ///< Sigma^L_{k|k}
  std::vector<Matrix> gap;           ///< D_k
  std::vector<Matrix> remote_dev;    ///< Rr_k
  std::vector<Matrix> state_cov;     ///< sum of the three
  std::vector<double> weighted_variance;  ///< tr(Q_r state_cov_k)
  double J = 0.0;    ///< expected quadratic cost
  double J_R = 0.0;  ///< cumulative weighted variance
  double augmented(double mu) const { return J + mu * J_R; }
};

PolicyMoments policy_moments(const ValidatedModel& model, const PolicySchedule& policy,
                             const CovarianceSchedule& schedule);

enum class MeanMode { kAnalytic, kEnsemble };

struct McEstimate {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  MeanMode mean_mode = MeanMode::kAnalytic;
  double J_hat = 0.0;
  double stderr_J = 0.0;
  double J_R_hat = 0.0;
  double stderr_JR = 0.0;
  double cov_J_JR = 0.0;

  double augmented(double mu) const { return J_hat + mu * J_R_hat; }
  double augmented_stderr(double mu) const;
};

struct McOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  int threads = 0;
  MeanMode mean_mode = MeanMode::kAnalytic;
  NoiseKind noise_kind = NoiseKind::kGaussian;
  double dof = 5.0;
};

/// Monte Carlo estimates of the quadratic cost and the cumulative weighted
/// variance under `policy`. Requires at least two samples.
McEstimate mc_evaluate(const ValidatedModel& model, const PolicySchedule& policy,
                       const McOptions& options);

/// Outcome of comparing the analytic risk with its Monte Carlo estimate.
struct RiskCrossCheck {
  double analytic = 0.0;
  double monte_carlo = 0.0;
  double monte_carlo_stderr = 0.0;
  double relative_discrepancy = 0.0;
  bool analytic_flagged = false;  ///< discrepancy above the threshold
  double authoritative = 0.0;     ///< MC when flagged, analytic otherwise
};

RiskCrossCheck cross_check_risk(double analytic, const McEstimate& mc,
                                double rel_threshold = 0.05);

}  // namespace risklq
