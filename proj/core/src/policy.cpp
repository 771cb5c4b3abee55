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
#include "risklq/policy.hpp"

#include <algorithm>

#include "risklq/error.hpp"

namespace risklq {

PolicySchedule PolicySchedule::from_solution(const RiccatiSolution& solution) {
  if (!solution.solvable) {
    throw NotSolvableError(solution.failed_step, solution.failed_matrix, solution.mu);
  }
  return PolicySchedule{solution.mu, solution.gains};
}

PolicySchedule PolicySchedule::stationary(const StationarySolution& solution,
                                          int horizon) {
  if (horizon < 0) {
    throw Error(ErrorKind::kInvalidArgument, "horizon",
                "horizon must be nonnegative");
  }
  return PolicySchedule{
      solution.mu,
      std::vector<GainSet>(static_cast<std::size_t>(horizon) + 1, solution.gains)};
}

ControlAction control_action(const GainSet& gains, Eigen::Index m_local,
                             const EstimatorState& est, const MeanState& mean) {
  ControlAction a;
  a.U = -gains.K * est.xhat_remote - gains.Kbar * mean.Ex;
  a.u_tilde = -gains.local_gain * (est.xhat_local - est.xhat_remote);
  a.u_local = a.U.head(m_local) + a.u_tilde;
  a.u_remote = a.U.tail(a.U.size() - m_local);
  return a;
}

std::vector<MeanState> mean_propagate(const ValidatedModel& model,
                                      const std::vector<GainSet>& gains,
                                      const Vector& x0_mean) {
  if (x0_mean.size() != model.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "x0_mean",
                "initial mean has wrong dimension");
  }
  std::vector<MeanState> path;
  path.reserve(gains.size() + 1);
  Vector Ex = x0_mean;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    const Matrix total = gains[k].K + gains[k].Kbar;
    Vector EU = -total * Ex;
    Vector next = model.A() * Ex + model.B() * EU;
    path.push_back(MeanState{Ex, std::move(EU), static_cast<int>(k)});
    Ex = std::move(next);
  }
  path.push_back(MeanState{Ex, Vector::Zero(model.m()), static_cast<int>(gains.size())});
  return path;
}

double PenaltyResiduals::max_abs() const {
  double out = 0.0;
  for (const Vector* v : {&fluctuation, &mean, &local}) {
    if (v->size() > 0) out = std::max(out, v->cwiseAbs().maxCoeff());
  }
  return out;
}

PenaltyResiduals completed_square_residuals(const GainSet& gains,
                                            const ControlAction& action,
                                            const MeanState& mean,
                                            const Vector& x,
                                            const EstimatorState& est) {
  PenaltyResiduals r;
  r.fluctuation = action.U - mean.EU + gains.K * (x - mean.Ex);
  r.mean = mean.EU + (gains.K + gains.Kbar) * mean.Ex;
  r.local = action.u_tilde + gains.local_gain * (est.xhat_local - est.xhat_remote);
  return r;
}

}  // namespace risklq
