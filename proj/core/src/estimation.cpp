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
#include "risklq/estimation.hpp"

#include <cmath>
#include <string>

#include "risklq/error.hpp"

namespace risklq {
namespace {

struct UpdateResult {
  Matrix W;
  Matrix Sigma_filt;
  Matrix update_cov;
};

UpdateResult measurement_update(const ValidatedModel& model,
                                const Matrix& sigma_pred, int k) {
  const Matrix& C = model.C();
  const Matrix& Qv = model.Q_v();
  const Matrix innovation = linalg::symmetrize(C * sigma_pred * C.transpose() + Qv);
  Matrix W;
  if (auto solved = linalg::spd_solve(innovation, C * sigma_pred)) {
    W = solved->transpose();
  } else if (model.options().allow_singular_measurement_noise) {
    W = sigma_pred * C.transpose() * linalg::psd_pinv(innovation);
  } else {
    throw Error(ErrorKind::kSingularInnovation, "step " + std::to_string(k),
                "innovation covariance C Sigma C' + Q_v is singular at step " +
                    std::to_string(k));
  }
  const Eigen::Index n = model.n();
  const Matrix I_WC = Matrix::Identity(n, n) - W * C;
  UpdateResult out;
  out.Sigma_filt = linalg::symmetrize(I_WC * sigma_pred * I_WC.transpose() +
                                      W * Qv * W.transpose());
  out.update_cov = linalg::symmetrize(W * innovation * W.transpose());
  out.W = std::move(W);
  return out;
}

}  // namespace

CovarianceSchedule covariance_schedule(const ValidatedModel& model,
                                       int horizon) {
  if (horizon < 0) {
    throw Error(ErrorKind::kInvalidArgument, "horizon",
                "horizon must be nonnegative");
  }
  const auto len = static_cast<std::size_t>(horizon) + 2;
  CovarianceSchedule s;
  s.Sigma_pred.reserve(len);
  s.Sigma_filt.reserve(len);
  s.W.reserve(len);
  s.update_cov.reserve(len);

  Matrix pred = model.Sigma_init();
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) {
      pred = linalg::symmetrize(model.A() * s.Sigma_filt.back() *
                                    model.A().transpose() +
                                model.Q_w());
    }
    UpdateResult u = measurement_update(model, pred, static_cast<int>(k));
    s.Sigma_pred.push_back(pred);
    s.Sigma_filt.push_back(std::move(u.Sigma_filt));
    s.W.push_back(std::move(u.W));
    s.update_cov.push_back(std::move(u.update_cov));
  }
  return s;
}

StationaryLocalCovariance stationary_local_covariance(
    const ValidatedModel& model, double tol, int max_iter) {
  StationaryLocalCovariance out;
  Matrix pred = model.Sigma_init();
  UpdateResult u = measurement_update(model, pred, 0);
  for (int it = 1; it <= max_iter; ++it) {
    Matrix next_pred = linalg::symmetrize(
        model.A() * u.Sigma_filt * model.A().transpose() + model.Q_w());
    UpdateResult next = measurement_update(model, next_pred, it);
    const double delta = linalg::max_abs(next.Sigma_filt - u.Sigma_filt);
    pred = std::move(next_pred);
    u = std::move(next);
    out.iterations = it;
    if (!u.Sigma_filt.allFinite()) break;
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }
  out.Sigma_pred = std::move(pred);
  out.Sigma_filt = std::move(u.Sigma_filt);
  out.W = std::move(u.W);
  out.update_cov = std::move(u.update_cov);
  return out;
}

EstimatorState initial_estimator_state(const ValidatedModel& model) {
  EstimatorState s;
  s.xhat_local = model.x0_mean();
  s.xhat_local_pred = model.x0_mean();
  s.xhat_remote = model.x0_mean();
  s.xhat_remote_pred = model.x0_mean();
  s.k = -1;
  return s;
}

EstimatorState local_filter_step(const ValidatedModel& model,
                                 const EstimatorState& state,
                                 const CovarianceSchedule& schedule,
                                 const Vector& y, const Vector& U_prev,
                                 const Vector& u_tilde_prev) {
  if (state.remote_pending) {
    throw Error(ErrorKind::kInvalidArgument, "estimator",
                "remote update for step " + std::to_string(state.k) +
                    " has not been applied");
  }
  const int k = state.k + 1;
  if (k >= static_cast<int>(schedule.W.size())) {
    throw Error(ErrorKind::kHorizonMismatch, "schedule",
                "covariance schedule does not cover step " + std::to_string(k));
  }
  EstimatorState next = state;
  next.k = k;
  if (k == 0) {
    next.xhat_local_pred = model.x0_mean();
  } else {
    next.xhat_local_pred = model.A() * state.xhat_local + model.B() * U_prev +
                           model.B_local() * u_tilde_prev;
  }
  const auto& W = schedule.W[static_cast<std::size_t>(k)];
  next.xhat_local = next.xhat_local_pred + W * (y - model.C() * next.xhat_local_pred);
  next.remote_pending = true;
  return next;
}

EstimatorState remote_estimator_step(const ValidatedModel& model,
                                     const EstimatorState& state, bool eta,
                                     const Vector& U_prev) {
  if (!state.remote_pending) {
    throw Error(ErrorKind::kInvalidArgument, "estimator",
                "remote update requires a preceding local update");
  }
  EstimatorState next = state;
  if (state.k == 0) {
    next.xhat_remote_pred = model.x0_mean();
  } else {
    next.xhat_remote_pred = model.A() * state.xhat_remote + model.B() * U_prev;
  }
  next.xhat_remote = eta ? next.xhat_local : next.xhat_remote_pred;
  next.remote_pending = false;
  return next;
}

namespace {

// One step of the remote error covariance recursion
//   Sigma^R_k = p [ F_c Sigma^R_{k-1} F_c' + F Sigma^L_{k-1} F_c' + A Sigma^L_{k-1} F' ]
//               + (1-p) Sigma^L_k + p Q_w,
// with F = B_local * local_gain and F_c = A - F.
Matrix remote_step(const ValidatedModel& model, const Matrix& local_gain,
                   const Matrix& sigma_r_prev, const Matrix& sigma_l_prev,
                   const Matrix& sigma_l) {
  const double p = model.p();
  const Matrix F = model.B_local() * local_gain;
  const Matrix Fc = model.A() - F;
  const Matrix next =
      p * (Fc * sigma_r_prev * Fc.transpose() + F * sigma_l_prev * Fc.transpose() +
           model.A() * sigma_l_prev * F.transpose()) +
      (1.0 - p) * sigma_l + p * model.Q_w();
  return linalg::symmetrize(next);
}

}  // namespace

std::vector<Matrix> remote_error_covariance(
    const ValidatedModel& model, const CovarianceSchedule& schedule,
    const std::vector<Matrix>& local_gains) {
  const std::size_t len = schedule.Sigma_filt.size();
  if (local_gains.size() + 1 < len) {
    throw Error(ErrorKind::kHorizonMismatch, "local_gains",
                "need local gains for steps 0.." + std::to_string(len - 2));
  }
  std::vector<Matrix> out;
  out.reserve(len);
  const double p = model.p();
  out.push_back(linalg::symmetrize((1.0 - p) * schedule.Sigma_filt[0] +
                                   p * model.Sigma_init()));
  for (std::size_t k = 1; k < len; ++k) {
    out.push_back(remote_step(model, local_gains[k - 1], out.back(),
                              schedule.Sigma_filt[k - 1], schedule.Sigma_filt[k]));
  }
  return out;
}

RemoteCovarianceAssessment remote_covariance_assessment(
    const ValidatedModel& model, const GainSet& stationary_gains, double tol,
    int max_iter) {
  RemoteCovarianceAssessment out;
  const Matrix closed = model.A() - model.B_local() * stationary_gains.local_gain;
  out.spectral_value = std::sqrt(model.p()) * linalg::spectral_radius(closed);
  out.converges = out.spectral_value < 1.0;

  const StationaryLocalCovariance local =
      stationary_local_covariance(model, tol, max_iter);
  out.Sigma_L_limit = local.Sigma_filt;
  if (!out.converges) return out;

  Matrix sigma_r = local.Sigma_filt;
  bool settled = false;
  for (int it = 1; it <= max_iter; ++it) {
    Matrix next = remote_step(model, stationary_gains.local_gain, sigma_r,
                              local.Sigma_filt, local.Sigma_filt);
    const double delta = linalg::max_abs(next - sigma_r);
    sigma_r = std::move(next);
    out.iterations = it;
    if (delta < tol * (1.0 + linalg::max_abs(sigma_r))) {
      settled = true;
      break;
    }
  }
  if (settled) out.Sigma_R_limit = std::move(sigma_r);
  return out;
}

}  // namespace risklq
