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
#include "risklq/evaluation.hpp"

#include <cmath>
#include <string>

#include "risklq/error.hpp"

namespace risklq {
namespace {

void check_horizon(int horizon, const CovarianceSchedule& schedule) {
  if (schedule.horizon() != horizon) {
    throw Error(ErrorKind::kHorizonMismatch, "schedule",
                "covariance schedule horizon " + std::to_string(schedule.horizon()) +
                    " does not match solution horizon " + std::to_string(horizon));
  }
}

void check_solvable(const RiccatiSolution& solution) {
  if (!solution.solvable) {
    throw NotSolvableError(solution.failed_step, solution.failed_matrix, solution.mu);
  }
}

}  // namespace

double initial_cost_term(const ValidatedModel& model, const RiccatiSolution& solution,
                         const CovarianceSchedule& schedule) {
  check_solvable(solution);
  check_horizon(solution.horizon, schedule);
  const Vector& xbar = model.x0_mean();
  return xbar.dot((solution.Z[0] + solution.S[0]) * xbar) +
         (solution.Theta[0] * schedule.update_cov[0]).trace();
}

CostBreakdown optimal_cost(const ValidatedModel& model, const RiccatiSolution& solution,
                           const CovarianceSchedule& schedule) {
  check_solvable(solution);
  check_horizon(solution.horizon, schedule);
  const int N = solution.horizon;
  const double mu = solution.mu;
  const Matrix Qmu = model.Q() + mu * model.Q_risk();
  const Matrix Gmu = model.G() + mu * model.Q_risk();

  CostBreakdown c;
  c.mu = mu;
  c.epsilon = model.epsilon();
  c.initial_term = initial_cost_term(model, solution, schedule);
  c.trace_terms.reserve(static_cast<std::size_t>(N) + 2);
  for (int k = 0; k <= N; ++k) {
    const auto i = static_cast<std::size_t>(k);
    c.trace_terms.push_back((Qmu * schedule.Sigma_filt[i]).trace() +
                            (solution.Theta[i + 1] * schedule.update_cov[i + 1]).trace());
  }
  c.trace_terms.push_back(
      (Gmu * schedule.Sigma_filt[static_cast<std::size_t>(N) + 1]).trace());
  c.total = c.initial_term;
  for (double t : c.trace_terms) c.total += t;
  c.dual_value = c.total - mu * c.epsilon;
  return c;
}

RiskRecursion risk_value(const ValidatedModel& model, const PolicySchedule& policy,
                         const CovarianceSchedule& schedule) {
  check_horizon(policy.horizon(), schedule);
  const int N = policy.horizon();
  const auto len = static_cast<std::size_t>(N) + 2;
  const Matrix& Qr = model.Q_risk();
  const double p = model.p();

  RiskRecursion r;
  r.O.resize(len);
  r.P.resize(len);
  r.W.resize(len);
  r.q.resize(len);
  r.O[len - 1] = Qr;
  r.P[len - 1] = Qr;
  r.W[len - 1] = -Qr;
  r.q[len - 1] = (Qr * schedule.Sigma_filt[len - 1]).trace();
  for (int k = N; k >= 0; --k) {
    const auto i = static_cast<std::size_t>(k);
    const GainSet& g = policy.gains[i];
    const Matrix Ar = model.A() - model.B() * g.K;
    const Matrix Ad = model.A() - model.B_local() * g.local_gain;
    const Matrix T = (1.0 - p) * r.O[i + 1] + p * r.P[i + 1];
    r.O[i] = linalg::symmetrize(Qr + Ar.transpose() * r.O[i + 1] * Ar);
    r.P[i] = linalg::symmetrize(Qr + Ad.transpose() * T * Ad);
    r.W[i] = -r.O[i];
    r.q[i] = r.q[i + 1] + (Qr * schedule.Sigma_filt[i]).trace() +
             (T * schedule.update_cov[i + 1]).trace();
  }
  const Matrix T0 = (1.0 - p) * r.O[0] + p * r.P[0];
  const Vector& xbar = model.x0_mean();
  r.J_R_analytic = (T0 * schedule.update_cov[0]).trace() + r.q[0] +
                   xbar.dot((r.O[0] + r.W[0]) * xbar);
  return r;
}

RiskRecursion risk_value(const ValidatedModel& model, const RiccatiSolution& solution,
                         const CovarianceSchedule& schedule) {
  check_solvable(solution);
  check_horizon(solution.horizon, schedule);
  return risk_value(model, PolicySchedule::from_solution(solution), schedule);
}

PolicyMoments policy_moments(const ValidatedModel& model, const PolicySchedule& policy,
                             const CovarianceSchedule& schedule) {
  check_horizon(policy.horizon(), schedule);
  const int N = policy.horizon();
  const auto len = static_cast<std::size_t>(N) + 2;
  const double p = model.p();
  const Matrix& Qr = model.Q_risk();
  const Eigen::Index m1 = model.m_local();

  PolicyMoments pm;
  pm.mean_path = mean_propagate(model, policy.gains, model.x0_mean());
  pm.local_error = schedule.Sigma_filt;
  pm.gap.reserve(len);
  pm.remote_dev.reserve(len);
  pm.state_cov.reserve(len);

  // Correction at step k: g_k = xhat^L_{k|k} - xhat^R_{k|k-1}. Its covariance
  // is G_k; a delivered packet moves the whole of g_k into the remote
  // deviation, a lost one leaves it in the gap.
  Matrix Gk = schedule.update_cov[0];
  pm.gap.push_back(p * Gk);
  pm.remote_dev.push_back((1.0 - p) * Gk);
  for (std::size_t k = 0; k + 1 < len; ++k) {
    const GainSet& g = policy.gains[k];
    const Matrix Ad = model.A() - model.B_local() * g.local_gain;
    const Matrix Ar = model.A() - model.B() * g.K;
    Gk = linalg::symmetrize(Ad * pm.gap[k] * Ad.transpose() + schedule.update_cov[k + 1]);
    pm.gap.push_back(p * Gk);
    pm.remote_dev.push_back(linalg::symmetrize(
        Ar * pm.remote_dev[k] * Ar.transpose() + (1.0 - p) * Gk));
  }

  pm.J = 0.0;
  pm.J_R = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    Matrix cov = linalg::symmetrize(pm.local_error[k] + pm.gap[k] + pm.remote_dev[k]);
    const double wv = (Qr * cov).trace();
    pm.weighted_variance.push_back(wv);
    pm.J_R += wv;
    const Vector& Ex = pm.mean_path[k].Ex;
    if (k + 1 < len) {
      const GainSet& g = policy.gains[k];
      pm.J += (model.Q() * cov).trace() + Ex.dot(model.Q() * Ex);
      // U = EU - K (xhat^R - Ex); u_tilde = -Gamma (xhat^L - xhat^R).
      const Vector& EU = pm.mean_path[k].EU;
      const Matrix KRK = g.K.transpose() * model.R() * g.K;
      pm.J += (KRK * pm.remote_dev[k]).trace() + EU.dot(model.R() * EU);
      if (m1 > 0) {
        const Matrix GRG = g.local_gain.transpose() * model.R_local() * g.local_gain;
        pm.J += (GRG * pm.gap[k]).trace();
      }
    } else {
      pm.J += (model.G() * cov).trace() + Ex.dot(model.G() * Ex);
    }
    pm.state_cov.push_back(std::move(cov));
  }
  return pm;
}

double McEstimate::augmented_stderr(double mu) const {
  const double var = stderr_J * stderr_J + mu * mu * stderr_JR * stderr_JR +
                     2.0 * mu * cov_J_JR / static_cast<double>(samples);
  return std::sqrt(std::max(0.0, var));
}

McEstimate mc_evaluate(const ValidatedModel& model, const PolicySchedule& policy,
                       const McOptions& options) {
  if (options.samples < 2) {
    throw Error(ErrorKind::kInvalidArgument, "samples",
                "Monte Carlo evaluation needs at least two samples");
  }
  const ClosedLoop loop(model, policy,
                        model_noise(model, options.noise_kind, options.dof));
  const EnsembleStats st =
      ensemble(loop, EnsembleOptions{options.samples, options.seed, options.threads});
  McEstimate e;
  e.samples = options.samples;
  e.seed = options.seed;
  e.mean_mode = options.mean_mode;
  e.J_hat = st.cost_mean;
  e.stderr_J = st.cost_stderr;
  e.J_R_hat = options.mean_mode == MeanMode::kAnalytic ? st.risk_mean : st.risk_ensemble;
  // The ensemble-centered estimator has the same leading-order spread.
  e.stderr_JR = st.risk_stderr;
  e.cov_J_JR = st.cost_risk_cov;
  return e;
}

RiskCrossCheck cross_check_risk(double analytic, const McEstimate& mc,
                                double rel_threshold) {
  RiskCrossCheck c;
  c.analytic = analytic;
  c.monte_carlo = mc.J_R_hat;
  c.monte_carlo_stderr = mc.stderr_JR;
  const double scale = std::max(std::abs(mc.J_R_hat), 1e-300);
  c.relative_discrepancy = std::abs(analytic - mc.J_R_hat) / scale;
  if (mc.J_R_hat == 0.0 && analytic == 0.0) c.relative_discrepancy = 0.0;
  c.analytic_flagged = c.relative_discrepancy > rel_threshold;
  c.authoritative = c.analytic_flagged ? mc.J_R_hat : analytic;
  return c;
}

}  // namespace risklq
