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
#include <vector>

#include "risklq/estimation.hpp"
#include "risklq/gains.hpp"
#include "risklq/model.hpp"

namespace risklq {

/// Backward solution for a fixed multiplier. Matrix sequences are indexed
/// 0..N+1 (terminal at N+1); `gains` is indexed 0..N.
struct RiccatiSolution {
  double mu = 0.0;
  int horizon = 0;
  std::vector<Matrix> Z;
  std::vector<Matrix> X;
  std::vector<Matrix> S;
  std::vector<Matrix> Theta;
  std::vector<GainSet> gains;
  bool solvable = true;
  /// Set when `solvable` is false: step and matrix that failed.
  int failed_step = -1;
  std::string failed_matrix;

  std::vector<Matrix> local_gains() const;
};

/// Recursion state one step ahead, i.e. (Z, X, S, Theta) at k+1.
struct RiccatiState {
  Matrix Z;
  Matrix X;
  Matrix S;
  Matrix Theta;
};

RiccatiState terminal_state(const ValidatedModel& model, double mu);

/// One backward step. Returns the gains computed from `next` and writes the
/// new state into `out`. On a positivity failure returns nullopt and sets
/// `failed` to "Upsilon", "M" or "Lambda".
std::optional<GainSet> riccati_step(const ValidatedModel& model, double mu,
                                    const RiccatiState& next, RiccatiState& out,
                                    std::string& failed);

/// Runs the recursion from k = N down to 0. Throws NotSolvableError at the
/// first step whose Upsilon, M or Lambda is not positive definite.
RiccatiSolution solve_finite(const ValidatedModel& model, double mu, int horizon);

/// Same recursion, but a positivity failure is reported through `solvable`,
/// `failed_step` and `failed_matrix` instead of an exception. Sequences are
/// only populated for steps after the failure.
RiccatiSolution try_solve_finite(const ValidatedModel& model, double mu,
                                 int horizon);

struct StationaryOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  /// Iterates whose entries exceed this magnitude are treated as divergent.
  double divergence_bound = 1e14;
};

struct StationarySolution {
  double mu = 0.0;
  Matrix Z;
  Matrix X;
  Matrix S;
  Matrix Theta;
  GainSet gains;
  bool converged = false;
  int iterations = 0;
  /// Max-norm residuals of the three fixed-point equations.
  double residual_Z = 0.0;
  double residual_X = 0.0;
  double residual_S = 0.0;
  bool Z_pd = false;
  bool ZS_pd = false;
  bool Theta_pd = false;
  RemoteCovarianceAssessment remote;
  /// Z > 0, Z + S > 0, Theta > 0 and the remote error covariance converges.
  bool ms_bounded = false;
};

/// Value-iterates the recursion from its terminal data until successive
/// (Z, X, S) differ by less than tol * (1 + |Z, X, S|_max) in max norm.
/// Throws Diverged when iterates blow up or the cap is reached, and
/// NotSolvableError when a positivity requirement fails along the way.
StationarySolution solve_stationary(const ValidatedModel& model, double mu,
                                    const StationaryOptions& options = {});

struct BoundednessVerdict {
  bool ms_bounded = false;
  bool diverged = false;
  double spectral_value = 0.0;
  std::string reason;
};

/// Non-throwing wrapper around solve_stationary for sweeps over p.
BoundednessVerdict boundedness_verdict(const ValidatedModel& model, double mu,
                                       const StationaryOptions& options = {});

}  // namespace risklq
