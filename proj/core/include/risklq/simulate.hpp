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
#include <string>
#include <string_view>
#include <vector>

#include "risklq/estimation.hpp"
#include "risklq/model.hpp"
#include "risklq/policy.hpp"

namespace risklq {

enum class NoiseKind { kGaussian, kStudentT, kShiftedExponential };

std::string_view to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(std::string_view name);

/// Zero-mean noise with the given covariance. Samples are F z where F is
/// the symmetric PSD square root of `covariance` and z has i.i.d.
/// standardized coordinates of the chosen kind:
///   gaussian             N(0, 1)
///   student_t            t_dof * sqrt((dof - 2) / dof), dof > 2
///   shifted_exponential  rate * Exp(rate) - 1, which does not depend on rate
struct NoiseSpec {
  NoiseKind kind = NoiseKind::kGaussian;
  Matrix covariance;
  double dof = 5.0;
  double rate = 1.0;
};

/// Distributions of the initial state deviation, process and measurement
/// noise.
struct NoiseModel {
  NoiseSpec initial;
  NoiseSpec process;
  NoiseSpec measurement;
};

/// Noise model using the covariances of `model` and the same kind throughout.
NoiseModel model_noise(const ValidatedModel& model,
                       NoiseKind kind = NoiseKind::kGaussian, double dof = 5.0);

/// Mixes a master seed and a trajectory index into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Every random quantity of one trajectory, drawn before simulation.
struct NoiseRealization {
  Vector x0;
  std::vector<Vector> w;  ///< 0..N
  std::vector<Vector> v;  ///< 0..N+1
  std::vector<int> eta;   ///< 0..N+1, 1 = delivered
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<Vector> x;            ///< 0..N+1
  std::vector<Vector> y;            ///< 0..N+1
  std::vector<int> eta;             ///< 0..N+1
  std::vector<Vector> xhat_local;   ///< 0..N+1
  std::vector<Vector> xhat_remote;  ///< 0..N+1
  std::vector<Vector> u_local;      ///< 0..N
  std::vector<Vector> u_remote;     ///< 0..N
  std::vector<Vector> u_tilde;      ///< 0..N
  std::vector<Vector> U;            ///< 0..N
  std::vector<Vector> w;            ///< 0..N
  std::vector<Vector> v;            ///< 0..N+1

  int horizon() const { return static_cast<int>(u_local.size()) - 1; }
};

/// Closed loop of plant, channel, both estimators and a gain schedule. Holds
/// the covariance schedule, analytic mean path and noise factors so that
/// many trajectories can be drawn cheaply. Immutable after construction.
class ClosedLoop {
 public:
  ClosedLoop(const ValidatedModel& model, PolicySchedule policy, NoiseModel noise);

  const ValidatedModel& model() const noexcept { return model_; }
  const PolicySchedule& policy() const noexcept { return policy_; }
  const CovarianceSchedule& schedule() const noexcept { return schedule_; }
  const std::vector<MeanState>& mean_path() const noexcept { return mean_path_; }
  const NoiseModel& noise() const noexcept { return noise_; }
  int horizon() const noexcept { return policy_.horizon(); }

  NoiseRealization draw(std::uint64_t seed) const;
  Trajectory run(const NoiseRealization& noise, std::uint64_t seed = 0) const;
  Trajectory simulate(std::uint64_t seed) const { return run(draw(seed), seed); }

 private:
  ValidatedModel model_;
  PolicySchedule policy_;
  NoiseModel noise_;
  CovarianceSchedule schedule_;
  std::vector<MeanState> mean_path_;
  Matrix initial_factor_;
  Matrix process_factor_;
  Matrix measurement_factor_;
};

/// Convenience wrappers around ClosedLoop.
Trajectory simulate_trajectory(const ValidatedModel& model,
                               const PolicySchedule& policy,
                               const NoiseModel& noise, std::uint64_t seed);
Trajectory simulate_with_noise(const ValidatedModel& model,
                               const PolicySchedule& policy,
                               const NoiseRealization& noise);

/// Per-trajectory cost: sum_{k<=N} (x'Qx + u_L'R_L u_L + u_R'R_R u_R) + x'Gx
/// at N+1.
double trajectory_cost(const ValidatedModel& model, const Trajectory& t);

struct EnsembleOptions {
  std::size_t samples = 1000;
  std::uint64_t master_seed = 0;
  int threads = 0;
};

/// Per-step and per-trajectory statistics of an ensemble. Weighted variances
/// use the risk weight. `weighted_variance` centers on the analytic mean
/// path; `weighted_variance_ensemble` centers on the ensemble mean.
struct EnsembleStats {
  std::size_t samples = 0;
  std::uint64_t master_seed = 0;
  int horizon = 0;
  bool degenerate = false;  ///< samples < 2: variances reported as zero

  std::vector<Vector> mean;
  std::vector<Matrix> covariance;  ///< ensemble-centered, unbiased
  std::vector<double> weighted_variance;
  std::vector<double> weighted_variance_stderr;
  std::vector<double> weighted_variance_ensemble;
  std::vector<Matrix> local_error_cov;   ///< E (x - xhat_local)(.)'
  std::vector<Matrix> remote_error_cov;  ///< E (x - xhat_remote)(.)'
  std::vector<double> second_moment;     ///< E x'x
  double failure_rate = 0.0;

  double cost_mean = 0.0;
  double cost_stderr = 0.0;
  double risk_mean = 0.0;  ///< sum_k of weighted_variance
  double risk_stderr = 0.0;
  double risk_ensemble = 0.0;  ///< sum_k of weighted_variance_ensemble
  /// Sample covariance of (cost, risk) per trajectory, for combined errors.
  double cost_risk_cov = 0.0;
};

EnsembleStats ensemble(const ClosedLoop& loop, const EnsembleOptions& options);

struct NoiseKindReport {
  NoiseKind kind = NoiseKind::kGaussian;
  double J_hat = 0.0;
  double stderr_J = 0.0;
  double J_R_hat = 0.0;
  double stderr_JR = 0.0;
  Vector final_mean;
};

struct InvarianceReport {
  bool gains_identical = false;
  std::vector<NoiseKindReport> kinds;
};

/// Solves the gains once per noise kind and compares them bytewise, then
/// reports Monte Carlo cost and risk for each kind at equal covariances.
InvarianceReport non_gaussian_invariance_check(const ValidatedModel& model,
                                               int horizon, double mu,
                                               const std::vector<NoiseKind>& kinds,
                                               const EnsembleOptions& options,
                                               double dof = 5.0);

}  // namespace risklq
