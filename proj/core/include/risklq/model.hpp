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

#include "risklq/linalg.hpp"

namespace risklq {

/// Problem instance as supplied by the user: plant, observation, lossy
/// uplink, quadratic cost and the variance budget.
///
/// Input ordering is local-first everywhere: the stacked input is
/// U = [u_local; u_remote].
struct SystemModel {
  Matrix A;         ///< n x n state transition
  Matrix B_local;   ///< n x m1
  Matrix B_remote;  ///< n x m2
  Matrix C;         ///< q x n observation map
  Matrix Q_w;       ///< n x n process-noise covariance
  Matrix Q_v;       ///< q x q measurement-noise covariance
  Matrix Q;         ///< n x n state cost weight
  std::optional<Matrix> Q_risk;  ///< n x n risk weight, defaults to Q
  Matrix R_local;   ///< m1 x m1
  Matrix R_remote;  ///< m2 x m2
  Matrix G;         ///< n x n terminal weight
  double p = 0.0;   ///< uplink failure probability
  Vector x0_mean;   ///< n
  Matrix Sigma_init;  ///< n x n
  double epsilon = 0.0;  ///< risk budget
};

/// B = [B_local B_remote], R = diag(R_local, R_remote).
struct StackedInputModel {
  Matrix B;
  Matrix R;
};

struct ValidationOptions {
  /// Accept a singular (PSD) measurement-noise covariance. Used for the
  /// perfect-observation limit; the Kalman gain then falls back to the
  /// pseudo-inverse of the innovation covariance.
  bool allow_singular_measurement_noise = false;
};

/// A model that passed `validate`. Immutable; all matrices are exactly
/// symmetric where the model requires symmetry and Q_risk is resolved.
class ValidatedModel {
 public:
  const SystemModel& raw() const noexcept { return model_; }

  const Matrix& A() const noexcept { return model_.A; }
  const Matrix& B_local() const noexcept { return model_.B_local; }
  const Matrix& B_remote() const noexcept { return model_.B_remote; }
  const Matrix& C() const noexcept { return model_.C; }
  const Matrix& Q_w() const noexcept { return model_.Q_w; }
  const Matrix& Q_v() const noexcept { return model_.Q_v; }
  const Matrix& Q() const noexcept { return model_.Q; }
  const Matrix& Q_risk() const noexcept { return *model_.Q_risk; }
  const Matrix& R_local() const noexcept { return model_.R_local; }
  const Matrix& R_remote() const noexcept { return model_.R_remote; }
  const Matrix& G() const noexcept { return model_.G; }
  double p() const noexcept { return model_.p; }
  const Vector& x0_mean() const noexcept { return model_.x0_mean; }
  const Matrix& Sigma_init() const noexcept { return model_.Sigma_init; }
  double epsilon() const noexcept { return model_.epsilon; }

  const Matrix& B() const noexcept { return stacked_.B; }
  const Matrix& R() const noexcept { return stacked_.R; }
  const StackedInputModel& stacked() const noexcept { return stacked_; }

  Eigen::Index n() const noexcept { return model_.A.rows(); }
  Eigen::Index m_local() const noexcept { return model_.B_local.cols(); }
  Eigen::Index m_remote() const noexcept { return model_.B_remote.cols(); }
  Eigen::Index m() const noexcept { return m_local() + m_remote(); }
  Eigen::Index q() const noexcept { return model_.C.rows(); }

  /// (A, C) detectable (PBH test).
  bool detectable() const noexcept { return detectable_; }
  /// (A, Q^{1/2}) observable. The stacked weight diag(Q + mu Q_risk, Q)
  /// is observable exactly when this pair is.
  bool observable() const noexcept { return observable_; }
  const ValidationOptions& options() const noexcept { return options_; }

 private:
  friend ValidatedModel validate(const SystemModel&, const ValidationOptions&);
  friend ValidatedModel validate(const ValidatedModel&);

  SystemModel model_;
  StackedInputModel stacked_;
  bool detectable_ = false;
  bool observable_ = false;
  ValidationOptions options_;
};

/// Checks dimensions, symmetry, definiteness and ranges; symmetrizes
/// near-symmetric inputs and precomputes the stacked input model.
/// Throws risklq::Error with kind DimensionMismatch, NotSymmetric, NotPSD,
/// NotPD, ProbabilityOutOfRange or InvalidArgument.
ValidatedModel validate(const SystemModel& model,
                        const ValidationOptions& options = {});

/// Re-validation is the identity.
ValidatedModel validate(const ValidatedModel& model);

StackedInputModel stack_inputs(const ValidatedModel& model);

/// Convenience: copy of `model` with a different failure probability,
/// revalidated with the same options.
ValidatedModel with_failure_probability(const ValidatedModel& model, double p);

}  // namespace risklq
