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
#include "risklq/model.hpp"

#include <cmath>
#include <string>

#include "risklq/error.hpp"

namespace risklq {
namespace {

void expect_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                  const std::string& name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorKind::kDimensionMismatch, name,
                name + " must be " + std::to_string(rows) + "x" +
                    std::to_string(cols) + ", got " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()));
  }
}

Matrix checked_symmetric(const Matrix& m, const std::string& name) {
  if (!linalg::is_nearly_symmetric(m)) {
    throw Error(ErrorKind::kNotSymmetric, name, name + " is not symmetric");
  }
  return linalg::symmetrize(m);
}

void expect_psd(const Matrix& m, const std::string& name) {
  if (!linalg::is_psd(m)) {
    throw Error(ErrorKind::kNotPSD, name,
                name + " is not positive semi-definite");
  }
}

void expect_pd(const Matrix& m, const std::string& name) {
  if (!linalg::is_pd(m)) {
    throw Error(ErrorKind::kNotPD, name, name + " is not positive definite");
  }
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

// Empty input blocks arrive as 0x0 from config files; give them the n x 0
// shape the rest of the code expects.
void normalize_empty_block(Matrix& b, Matrix& r, Eigen::Index n) {
  if (b.size() == 0) b.resize(n, 0);
  if (r.size() == 0) r.resize(0, 0);
}

}  // namespace

ValidatedModel validate(const SystemModel& input,
                        const ValidationOptions& options) {
  SystemModel m = input;
  const Eigen::Index n = m.A.rows();
  if (n == 0) {
    throw Error(ErrorKind::kDimensionMismatch, "A", "A must be non-empty");
  }
  expect_shape(m.A, n, n, "A");
  normalize_empty_block(m.B_local, m.R_local, n);
  normalize_empty_block(m.B_remote, m.R_remote, n);
  expect_shape(m.B_local, n, m.B_local.cols(), "B_local");
  expect_shape(m.B_remote, n, m.B_remote.cols(), "B_remote");
  const Eigen::Index m1 = m.B_local.cols();
  const Eigen::Index m2 = m.B_remote.cols();
  if (m1 + m2 == 0) {
    throw Error(ErrorKind::kDimensionMismatch, "B",
                "at least one input channel is required");
  }
  expect_shape(m.C, m.C.rows(), n, "C");
  const Eigen::Index q = m.C.rows();
  if (q == 0) {
    throw Error(ErrorKind::kDimensionMismatch, "C", "C must have rows");
  }
  if (!m.Q_risk) m.Q_risk = m.Q;

  expect_shape(m.Q_w, n, n, "Q_w");
  expect_shape(m.Q_v, q, q, "Q_v");
  expect_shape(m.Q, n, n, "Q");
  expect_shape(*m.Q_risk, n, n, "Q_risk");
  expect_shape(m.R_local, m1, m1, "R_local");
  expect_shape(m.R_remote, m2, m2, "R_remote");
  expect_shape(m.G, n, n, "G");
  expect_shape(m.Sigma_init, n, n, "Sigma_init");
  if (m.x0_mean.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "x0_mean",
                "x0_mean must have length " + std::to_string(n));
  }

  for (const auto& [mat, name] :
       {std::pair<const Matrix*, const char*>{&m.A, "A"}, {&m.B_local, "B_local"},
        {&m.B_remote, "B_remote"}, {&m.C, "C"}, {&m.Q_w, "Q_w"}, {&m.Q_v, "Q_v"},
        {&m.Q, "Q"}, {&*m.Q_risk, "Q_risk"}, {&m.R_local, "R_local"},
        {&m.R_remote, "R_remote"}, {&m.G, "G"}, {&m.Sigma_init, "Sigma_init"}}) {
    if (!all_finite(*mat)) {
      throw Error(ErrorKind::kInvalidArgument, name,
                  std::string(name) + " has non-finite entries");
    }
  }
  if (!m.x0_mean.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "x0_mean",
                "x0_mean has non-finite entries");
  }

  m.Q_w = checked_symmetric(m.Q_w, "Q_w");
  m.Q_v = checked_symmetric(m.Q_v, "Q_v");
  m.Q = checked_symmetric(m.Q, "Q");
  m.Q_risk = checked_symmetric(*m.Q_risk, "Q_risk");
  m.R_local = checked_symmetric(m.R_local, "R_local");
  m.R_remote = checked_symmetric(m.R_remote, "R_remote");
  m.G = checked_symmetric(m.G, "G");
  m.Sigma_init = checked_symmetric(m.Sigma_init, "Sigma_init");

  expect_psd(m.Q, "Q");
  expect_psd(*m.Q_risk, "Q_risk");
  expect_psd(m.G, "G");
  expect_psd(m.Q_w, "Q_w");
  expect_psd(m.Sigma_init, "Sigma_init");
  if (options.allow_singular_measurement_noise) {
    expect_psd(m.Q_v, "Q_v");
  } else {
    expect_pd(m.Q_v, "Q_v");
  }
  expect_pd(m.R_local, "R_local");
  expect_pd(m.R_remote, "R_remote");

  if (!(m.p >= 0.0 && m.p <= 1.0)) {
    throw Error(ErrorKind::kProbabilityOutOfRange, "p",
                "failure probability p=" + std::to_string(m.p) +
                    " outside [0, 1]");
  }
  if (!(m.epsilon >= 0.0) || !std::isfinite(m.epsilon)) {
    throw Error(ErrorKind::kInvalidArgument, "epsilon",
                "risk budget epsilon must be finite and nonnegative");
  }

  ValidatedModel out;
  out.model_ = std::move(m);
  out.options_ = options;
  out.stacked_ = stack_inputs(out);
  out.detectable_ = linalg::is_detectable(out.model_.A, out.model_.C);
  out.observable_ =
      linalg::is_observable(out.model_.A, linalg::psd_sqrt(out.model_.Q));
  return out;
}

ValidatedModel validate(const ValidatedModel& model) {
  return validate(model.raw(), model.options());
}

StackedInputModel stack_inputs(const ValidatedModel& model) {
  const Eigen::Index n = model.n();
  const Eigen::Index m1 = model.m_local();
  const Eigen::Index m2 = model.m_remote();
  StackedInputModel s;
  s.B.resize(n, m1 + m2);
  s.B.leftCols(m1) = model.B_local();
  s.B.rightCols(m2) = model.B_remote();
  s.R = Matrix::Zero(m1 + m2, m1 + m2);
  s.R.topLeftCorner(m1, m1) = model.R_local();
  s.R.bottomRightCorner(m2, m2) = model.R_remote();
  return s;
}

ValidatedModel with_failure_probability(const ValidatedModel& model, double p) {
  SystemModel raw = model.raw();
  raw.p = p;
  return validate(raw, model.options());
}

}  // namespace risklq
