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

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace risklq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Relative tolerance used for semi-definiteness: the smallest eigenvalue may
/// dip to -kPsdTol * (1 + largest eigenvalue).
inline constexpr double kPsdTol = 1e-9;
/// Strict positivity: the smallest eigenvalue must exceed kPdTol * (1 + largest).
inline constexpr double kPdTol = 1e-9;
/// Symmetrization tolerance: ||M - M'||_max <= kSymTol * (1 + ||M||_max).
inline constexpr double kSymTol = 1e-9;

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double max_abs(const Matrix& m);

bool is_nearly_symmetric(const Matrix& m, double tol = kSymTol);

/// Eigenvalues of the symmetric part of `m`, ascending. Empty input gives an
/// empty vector.
Vector symmetric_eigenvalues(const Matrix& m);

bool is_psd(const Matrix& m, double tol = kPsdTol);
bool is_pd(const Matrix& m, double tol = kPdTol);

/// Symmetric PSD square root via eigendecomposition; negative eigenvalues
/// within round-off are clamped to zero.
Matrix psd_sqrt(const Matrix& m);

/// Solves `spd * X = rhs` with a Cholesky factorization. Returns nullopt when
/// the factorization fails or `spd` is not PD under `is_pd`. A 0x0 system is
/// trivially solvable.
std::optional<Matrix> spd_solve(const Matrix& spd, const Matrix& rhs);

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix.
Matrix psd_pinv(const Matrix& m, double rel_tol = 1e-12);

/// Largest-magnitude eigenvalue (complex spectrum allowed).
double spectral_radius(const Matrix& m);

/// PBH test: every eigenvalue with |lambda| >= 1 is observable through `c`.
bool is_detectable(const Matrix& a, const Matrix& c);

/// Rank test on the observability matrix [c; c a; ...; c a^{n-1}].
bool is_observable(const Matrix& a, const Matrix& c);

}  // namespace linalg
}  // namespace risklq
