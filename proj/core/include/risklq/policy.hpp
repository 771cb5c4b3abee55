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

#include <vector>

#include "risklq/estimation.hpp"
#include "risklq/gains.hpp"
#include "risklq/model.hpp"
#include "risklq/riccati.hpp"

namespace risklq {

/// Mean of the state (equal to the mean of the remote estimate) and of the
/// stacked input at step k.
struct MeanState {
  Vector Ex;
  Vector EU;
  int k = 0;
};

/// Controls at one step. `U` is the stacked [local-hat; remote] input; the
/// applied local input is the top block of U plus `u_tilde`.
struct ControlAction {
  Vector u_local;
  Vector u_remote;
  Vector U;
  Vector u_tilde;
};

/// Gains for steps 0..N. Built from a finite solution, or from stationary
/// gains replicated over a horizon.
struct PolicySchedule {
  double mu = 0.0;
  std::vector<GainSet> gains;

  int horizon() const { return static_cast<int>(gains.size()) - 1; }

  static PolicySchedule from_solution(const RiccatiSolution& solution);
  static PolicySchedule stationary(const StationarySolution& solution, int horizon);
};

///   U       = -K xhat_remote - Kbar Ex
///   u_tilde = -local_gain (xhat_local - xhat_remote)
ControlAction control_action(const GainSet& gains, Eigen::Index m_local,
                             const EstimatorState& est, const MeanState& mean);

/// Deterministic mean path Ex_0 = x0_mean, Ex_{k+1} = (A - B(K + Kbar)) Ex_k,
/// with EU_k = -(K + Kbar) Ex_k. Length N+2; EU at N+1 is zero.
std::vector<MeanState> mean_propagate(const ValidatedModel& model,
                                      const std::vector<GainSet>& gains,
                                      const Vector& x0_mean);

/// The three completed-square penalty terms of the optimal cost at one step.
struct PenaltyResiduals {
  Vector fluctuation;  ///< U - EU + K (x - Ex)
  Vector mean;         ///< EU + (K + Kbar) Ex
  Vector local;        ///< u_tilde + local_gain (xhat_local - xhat_remote)

  double max_abs() const;
};

PenaltyResiduals completed_square_residuals(const GainSet& gains,
                                            const ControlAction& action,
                                            const MeanState& mean,
                                            const Vector& x,
                                            const EstimatorState& est);

}  // namespace risklq
