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
#include <vector>

#include "risklq/gains.hpp"
#include "risklq/model.hpp"

namespace risklq {

/// Local Kalman error covariances, indexed 0..N+1.
struct CovarianceSchedule {
  std::vector<Matrix> Sigma_pred;  ///< Sigma^L_{k|k-1}
  std::vector<Matrix> Sigma_filt;  ///< Sigma^L_{k|k}
  std::vector<Matrix> W;           ///< Kalman gains
  /// Covariance of the estimate correction x^L_{k|k} - x^L_{k|k-1}, i.e.
  /// W_k (C Sigma_pred C' + Q_v) W_k'. Equals Sigma_pred - Sigma_filt.
  std::vector<Matrix> update_cov;

  int horizon() const { return static_cast<int>(Sigma_filt.size()) - 2; }
};

/// Runs the prediction / Joseph-form update for k = 0..N+1 starting from
/// Sigma_{0|-1} = Sigma_init. The schedule never depends on the controls.
///
/// Throws SingularInnovation when C Sigma C' + Q_v is singular and the model
/// was not validated with `allow_singular_measurement_noise`; otherwise the
/// pseudo-inverse is used.
CovarianceSchedule covariance_schedule(const ValidatedModel& model, int horizon);

struct StationaryLocalCovariance {
  Matrix Sigma_pred;
  Matrix Sigma_filt;
  Matrix W;
  Matrix update_cov;
  bool converged = false;
  int iterations = 0;
};

/// Fixed point of the local covariance recursion. Stops when successive
/// filtered covariances differ by less than `tol` in max norm.
StationaryLocalCovariance stationary_local_covariance(
    const ValidatedModel& model, double tol = 1e-10, int max_iter = 100000);

/// Conditional means held by the two controllers. `k` is the index of the
/// most recent measurement update (-1 before the first one).
struct EstimatorState {
  Vector xhat_local;        ///< x^L_{k|k}
  Vector xhat_local_pred;   ///< x^L_{k|k-1}
  Vector xhat_remote;       ///< x^R_{k|k}
  Vector xhat_remote_pred;  ///< x^R_{k|k-1}
  int k = -1;
  bool remote_pending = false;
};

EstimatorState initial_estimator_state(const ValidatedModel& model);

/// Advances the local filter to step k+1. For k+1 = 0 the prediction is the
/// prior mean; otherwise x^L_{k+1|k} = A x^L_{k|k} + B U_prev + B_local
/// u_tilde_prev. `U_prev` is the stacked [local-hat; remote] input.
EstimatorState local_filter_step(const ValidatedModel& model,
                                 const EstimatorState& state,
                                 const CovarianceSchedule& schedule,
                                 const Vector& y, const Vector& U_prev,
                                 const Vector& u_tilde_prev);

/// Remote update for the step just filtered locally. The remote predictor
/// uses only U_prev; a delivered packet (eta = true) replaces the prediction
/// with the local filtered mean.
EstimatorState remote_estimator_step(const ValidatedModel& model,
                                     const EstimatorState& state, bool eta,
                                     const Vector& U_prev);

/// Remote error covariance E[(x - x^R)(x - x^R)'] over a finite horizon
/// for the local gains in `local_gains` (indexed 0..N). Index 0 is
/// (1-p) Sigma^L_{0|0} + p Sigma_init.
std::vector<Matrix> remote_error_covariance(
    const ValidatedModel& model, const CovarianceSchedule& schedule,
    const std::vector<Matrix>& local_gains);

struct RemoteCovarianceAssessment {
  bool converges = false;
  /// sqrt(p) * |lambda_max(A - B_local local_gain)|
  double spectral_value = 0.0;
  std::optional<Matrix> Sigma_R_limit;
  Matrix Sigma_L_limit;
  int iterations = 0;
};

/// Mean-square limit test for the remote estimation error under stationary
/// gains. When the spectral value is below one the limit is computed by
/// iterating the remote covariance recursion to a fixed point.
RemoteCovarianceAssessment remote_covariance_assessment(
    const ValidatedModel& model, const GainSet& stationary_gains,
    double tol = 1e-10, int max_iter = 100000);

}  // namespace risklq
