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

#include "risklq/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "risklq/error.hpp"

namespace risklq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotSymmetric: return "NotSymmetric";
    case ErrorKind::kNotPSD: return "NotPSD";
    case ErrorKind::kNotPD: return "NotPD";
    case ErrorKind::kProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kSingularInnovation: return "SingularInnovation";
    case ErrorKind::kNotSolvable: return "NotSolvable";
    case ErrorKind::kDiverged: return "Diverged";
    case ErrorKind::kHorizonMismatch: return "HorizonMismatch";
    case ErrorKind::kInfeasibleWithinCap: return "InfeasibleWithinCap";
    case ErrorKind::kMonotonicityViolation: return "MonotonicityViolation";
    case ErrorKind::kCertificateFailed: return "CertificateFailed";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

namespace linalg {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_nearly_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.transpose()) <= tol * (1.0 + max_abs(m));
}

Vector symmetric_eigenvalues(const Matrix& m) {
  if (m.size() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool is_psd(const Matrix& m, double tol) {
  if (m.size() == 0) return true;
  const Vector ev = symmetric_eigenvalues(m);
  const double largest = std::max(0.0, ev.maxCoeff());
  return ev.minCoeff() >= -tol * (1.0 + largest);
}

bool is_pd(const Matrix& m, double tol) {
  if (m.size() == 0) return true;
  const Vector ev = symmetric_eigenvalues(m);
  const double largest = std::max(0.0, ev.maxCoeff());
  return ev.minCoeff() > tol * (1.0 + largest);
}

Matrix psd_sqrt(const Matrix& m) {
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

std::optional<Matrix> spd_solve(const Matrix& spd, const Matrix& rhs) {
  if (spd.rows() == 0) return Matrix::Zero(0, rhs.cols());
  if (!is_pd(spd)) return std::nullopt;
  Eigen::LLT<Matrix> llt(symmetrize(spd));
  if (llt.info() != Eigen::Success) return std::nullopt;
  return llt.solve(rhs);
}

Matrix psd_pinv(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  const Vector& ev = es.eigenvalues();
  const double cutoff = rel_tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Vector inv = Vector::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) inv(i) = 1.0 / ev(i);
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

double spectral_radius(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_detectable(const Matrix& a, const Matrix& c) {
  const Eigen::Index n = a.rows();
  if (n == 0) return true;
  using CMatrix = Eigen::MatrixXcd;
  Eigen::EigenSolver<Matrix> es(a, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> lambda = es.eigenvalues()(i);
    if (std::abs(lambda) < 1.0) continue;
    CMatrix pbh(n + c.rows(), n);
    pbh.topRows(n) = a.cast<std::complex<double>>() -
                     lambda * CMatrix::Identity(n, n);
    pbh.bottomRows(c.rows()) = c.cast<std::complex<double>>();
    Eigen::FullPivHouseholderQR<CMatrix> qr(pbh);
    qr.setThreshold(1e-10);
    if (qr.rank() < n) return false;
  }
  return true;
}

bool is_observable(const Matrix& a, const Matrix& c) {
  const Eigen::Index n = a.rows();
  if (n == 0) return true;
  Matrix obs(c.rows() * n, n);
  Matrix block = c;
  for (Eigen::Index i = 0; i < n; ++i) {
    obs.middleRows(i * c.rows(), c.rows()) = block;
    block = block * a;
  }
  Eigen::FullPivLU<Matrix> lu(obs);
  lu.setThreshold(1e-10);
  return lu.rank() == n;
}

}  // namespace linalg
}  // namespace risklq
