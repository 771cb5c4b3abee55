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

#include "risklq/model.hpp"

namespace risklq::fixtures {

/// Unstable two-state plant A = [[4, 1], [1, 0.1]] with noisy observation,
/// heavy process and measurement noise (10 I) and x0 ~ N((1, 1), I).
/// Epsilon is not used by this instance and is set to zero.
SystemModel example1(double p = 0.5);
inline constexpr int kExample1Horizon = 50;

/// A = [[2, 0.1], [1, 0.1]], unit noise covariances, x0 ~ N(0, I),
/// epsilon = 40.
SystemModel example2(double p = 0.5);
inline constexpr int kExample2Horizon = 5;
inline constexpr double kExample2Epsilon = 40.0;

/// A = diag(1.1, 0.5) where only the remote input reaches the unstable
/// mode. The remote error covariance stays bounded iff 1.21 p < 1. The
/// threshold sits close to p = 1 so that loss runs long enough to show the
/// divergence are common in moderate ensembles.
SystemModel boundedness_sweep(double p);
inline constexpr double kBoundednessThreshold = 1.0 / 1.21;

/// Scalar remote-only plant x+ = a x + u + w observed without noise
/// (C = 1, Q_v = 0); validate with allow_singular_measurement_noise.
SystemModel scalar_perfect_information(double a = 1.2);

}  // namespace risklq::fixtures
