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
#include "risklq/simulate.hpp"

#include <cmath>
#include <cstring>
#include <random>

#include "risklq/error.hpp"
#include "risklq/parallel.hpp"
#include "risklq/riccati.hpp"

namespace risklq {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kGaussian:
      return "gaussian";
    case NoiseKind::kStudentT:
      return "student_t";
    case NoiseKind::kShiftedExponential:
      return "shifted_exponential";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(std::string_view name) {
  if (name == "gaussian") return NoiseKind::kGaussian;
  if (name == "student_t" || name == "scaled_student_t") return NoiseKind::kStudentT;
  if (name == "shifted_exponential" || name == "exponential") {
    return NoiseKind::kShiftedExponential;
  }
  throw Error(ErrorKind::kConfig, "noise.kind",
              "unknown noise kind '" + std::string(name) + "'");
}

NoiseModel model_noise(const ValidatedModel& model, NoiseKind kind, double dof) {
  NoiseModel nm;
  nm.initial = NoiseSpec{kind, model.Sigma_init(), dof, 1.0};
  nm.process = NoiseSpec{kind, model.Q_w(), dof, 1.0};
  nm.measurement = NoiseSpec{kind, model.Q_v(), dof, 1.0};
  return nm;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 over a combination of both inputs
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

void check_spec(const NoiseSpec& spec, Eigen::Index dim, const char* name) {
  if (spec.covariance.rows() != dim || spec.covariance.cols() != dim) {
    throw Error(ErrorKind::kDimensionMismatch, name,
                std::string(name) + " noise covariance has wrong dimension");
  }
  if (!linalg::is_psd(spec.covariance)) {
    throw Error(ErrorKind::kNotPSD, name,
                std::string(name) + " noise covariance is not PSD");
  }
  if (spec.kind == NoiseKind::kStudentT && !(spec.dof > 2.0)) {
    throw Error(ErrorKind::kInvalidArgument, name,
                "student-t noise needs more than 2 degrees of freedom");
  }
  if (spec.kind == NoiseKind::kShiftedExponential && !(spec.rate > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, name,
                "exponential noise needs a positive rate");
  }
}

Vector standardized(const NoiseSpec& spec, Eigen::Index dim, std::mt19937_64& rng) {
  Vector z(dim);
  switch (spec.kind) {
    case NoiseKind::kGaussian: {
      std::normal_distribution<double> d(0.0, 1.0);
      for (Eigen::Index i = 0; i < dim; ++i) z(i) = d(rng);
      break;
    }
    case NoiseKind::kStudentT: {
      std::student_t_distribution<double> d(spec.dof);
      const double scale = std::sqrt((spec.dof - 2.0) / spec.dof);
      for (Eigen::Index i = 0; i < dim; ++i) z(i) = scale * d(rng);
      break;
    }
    case NoiseKind::kShiftedExponential: {
      std::exponential_distribution<double> d(spec.rate);
      for (Eigen::Index i = 0; i < dim; ++i) z(i) = spec.rate * d(rng) - 1.0;
      break;
    }
  }
  return z;
}

}  // namespace

ClosedLoop::ClosedLoop(const ValidatedModel& model, PolicySchedule policy,
                       NoiseModel noise)
    : model_(model), policy_(std::move(policy)), noise_(std::move(noise)) {
  if (policy_.gains.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "policy", "policy has no gains");
  }
  const auto& g0 = policy_.gains.front();
  if (g0.K.rows() != model_.m() || g0.K.cols() != model_.n() ||
      g0.local_gain.rows() != model_.m_local()) {
    throw Error(ErrorKind::kDimensionMismatch, "policy",
                "policy gains do not match the model dimensions");
  }
  check_spec(noise_.initial, model_.n(), "initial");
  check_spec(noise_.process, model_.n(), "process");
  check_spec(noise_.measurement, model_.q(), "measurement");
  schedule_ = covariance_schedule(model_, policy_.horizon());
  mean_path_ = mean_propagate(model_, policy_.gains, model_.x0_mean());
  initial_factor_ = linalg::psd_sqrt(noise_.initial.covariance);
  process_factor_ = linalg::psd_sqrt(noise_.process.covariance);
  measurement_factor_ = linalg::psd_sqrt(noise_.measurement.covariance);
}

NoiseRealization ClosedLoop::draw(std::uint64_t seed) const {
  const int N = horizon();
  const Eigen::Index n = model_.n();
  const Eigen::Index q = model_.q();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  NoiseRealization r;
  r.x0 = model_.x0_mean() + initial_factor_ * standardized(noise_.initial, n, rng);
  r.w.reserve(static_cast<std::size_t>(N) + 1);
  r.v.reserve(static_cast<std::size_t>(N) + 2);
  r.eta.reserve(static_cast<std::size_t>(N) + 2);
  for (int k = 0; k <= N + 1; ++k) {
    r.v.push_back(measurement_factor_ * standardized(noise_.measurement, q, rng));
    r.eta.push_back(unif(rng) >= model_.p() ? 1 : 0);
    if (k <= N) {
      r.w.push_back(process_factor_ * standardized(noise_.process, n, rng));
    }
  }
  return r;
}

Trajectory ClosedLoop::run(const NoiseRealization& noise, std::uint64_t seed) const {
  const int N = horizon();
  const auto len = static_cast<std::size_t>(N) + 2;
  if (noise.v.size() != len || noise.eta.size() != len || noise.w.size() + 1 != len) {
    throw Error(ErrorKind::kHorizonMismatch, "noise",
                "noise realization does not match the policy horizon");
  }
  Trajectory t;
  t.seed = seed;
  t.w = noise.w;
  t.v = noise.v;
  t.eta = noise.eta;
  for (auto* seq : {&t.x, &t.y, &t.xhat_local, &t.xhat_remote}) seq->reserve(len);
  for (auto* seq : {&t.u_local, &t.u_remote, &t.u_tilde, &t.U}) seq->reserve(len - 1);

  EstimatorState est = initial_estimator_state(model_);
  Vector x = noise.x0;
  Vector U_prev = Vector::Zero(model_.m());
  Vector ut_prev = Vector::Zero(model_.m_local());
  for (std::size_t k = 0; k < len; ++k) {
    Vector y = model_.C() * x + noise.v[k];
    est = local_filter_step(model_, est, schedule_, y, U_prev, ut_prev);
    est = remote_estimator_step(model_, est, noise.eta[k] != 0, U_prev);
    t.x.push_back(x);
    t.y.push_back(std::move(y));
    t.xhat_local.push_back(est.xhat_local);
    t.xhat_remote.push_back(est.xhat_remote);
    if (k + 1 == len) break;

    ControlAction a = control_action(policy_.gains[k], model_.m_local(), est, mean_path_[k]);
    x = model_.A() * x + model_.B_local() * a.u_local + model_.B_remote() * a.u_remote +
        noise.w[k];
    U_prev = a.U;
    ut_prev = a.u_tilde;
    t.u_local.push_back(std::move(a.u_local));
    t.u_remote.push_back(std::move(a.u_remote));
    t.u_tilde.push_back(std::move(a.u_tilde));
    t.U.push_back(std::move(a.U));
  }
  return t;
}

Trajectory simulate_trajectory(const ValidatedModel& model,
                               const PolicySchedule& policy,
                               const NoiseModel& noise, std::uint64_t seed) {
  return ClosedLoop(model, policy, noise).simulate(seed);
}

Trajectory simulate_with_noise(const ValidatedModel& model,
                               const PolicySchedule& policy,
                               const NoiseRealization& noise) {
  return ClosedLoop(model, policy, model_noise(model)).run(noise);
}

double trajectory_cost(const ValidatedModel& model, const Trajectory& t) {
  double cost = 0.0;
  for (std::size_t k = 0; k < t.u_local.size(); ++k) {
    cost += t.x[k].dot(model.Q() * t.x[k]);
    cost += t.u_local[k].dot(model.R_local() * t.u_local[k]);
    cost += t.u_remote[k].dot(model.R_remote() * t.u_remote[k]);
  }
  cost += t.x.back().dot(model.G() * t.x.back());
  return cost;
}

namespace {

constexpr std::size_t kChunk = 256;

struct Accumulator {
  std::vector<Vector> sum_d;  // deviations from the analytic mean
  std::vector<Matrix> sum_dd;
  std::vector<double> sum_z;
  std::vector<double> sum_z2;
  std::vector<Matrix> sum_el;
  std::vector<Matrix> sum_er;
  std::vector<double> sum_xx;
  double failures = 0.0;
  double sum_c = 0.0;
  double sum_c2 = 0.0;
  double sum_r = 0.0;
  double sum_r2 = 0.0;
  double sum_cr = 0.0;

  Accumulator(std::size_t len, Eigen::Index n)
      : sum_d(len, Vector::Zero(n)),
        sum_dd(len, Matrix::Zero(n, n)),
        sum_z(len, 0.0),
        sum_z2(len, 0.0),
        sum_el(len, Matrix::Zero(n, n)),
        sum_er(len, Matrix::Zero(n, n)),
        sum_xx(len, 0.0) {}

  void add(const Accumulator& o) {
    for (std::size_t k = 0; k < sum_d.size(); ++k) {
      sum_d[k] += o.sum_d[k];
      sum_dd[k] += o.sum_dd[k];
      sum_z[k] += o.sum_z[k];
      sum_z2[k] += o.sum_z2[k];
      sum_el[k] += o.sum_el[k];
      sum_er[k] += o.sum_er[k];
      sum_xx[k] += o.sum_xx[k];
    }
    failures += o.failures;
    sum_c += o.sum_c;
    sum_c2 += o.sum_c2;
    sum_r += o.sum_r;
    sum_r2 += o.sum_r2;
    sum_cr += o.sum_cr;
  }
};

}  // namespace

EnsembleStats ensemble(const ClosedLoop& loop, const EnsembleOptions& options) {
  if (options.samples < 1) {
    throw Error(ErrorKind::kInvalidArgument, "samples", "need at least one sample");
  }
  const ValidatedModel& model = loop.model();
  const Matrix& Qr = model.Q_risk();
  const int N = loop.horizon();
  const auto len = static_cast<std::size_t>(N) + 2;
  const Eigen::Index n = model.n();
  const std::size_t S = options.samples;
  const std::size_t n_chunks = (S + kChunk - 1) / kChunk;

  std::vector<Accumulator> parts(n_chunks, Accumulator(len, n));
  parallel_chunks(n_chunks, worker_count(options.threads), [&](std::size_t c) {
    Accumulator& acc = parts[c];
    const std::size_t end = std::min(S, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const Trajectory t = loop.simulate(derive_seed(options.master_seed, i));
      double risk = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        const Vector d = t.x[k] - loop.mean_path()[k].Ex;
        const double z = d.dot(Qr * d);
        const Vector el = t.x[k] - t.xhat_local[k];
        const Vector er = t.x[k] - t.xhat_remote[k];
        acc.sum_d[k] += d;
        acc.sum_dd[k].noalias() += d * d.transpose();
        acc.sum_z[k] += z;
        acc.sum_z2[k] += z * z;
        acc.sum_el[k].noalias() += el * el.transpose();
        acc.sum_er[k].noalias() += er * er.transpose();
        acc.sum_xx[k] += t.x[k].squaredNorm();
        acc.failures += t.eta[k] == 0 ? 1.0 : 0.0;
        risk += z;
      }
      const double cost = trajectory_cost(model, t);
      acc.sum_c += cost;
      acc.sum_c2 += cost * cost;
      acc.sum_r += risk;
      acc.sum_r2 += risk * risk;
      acc.sum_cr += cost * risk;
    }
  });
  Accumulator total(len, n);
  for (const auto& part : parts) total.add(part);

  EnsembleStats st;
  st.samples = S;
  st.master_seed = options.master_seed;
  st.horizon = N;
  st.degenerate = S < 2;
  const double Sd = static_cast<double>(S);
  const double denom = st.degenerate ? 1.0 : Sd - 1.0;
  for (std::size_t k = 0; k < len; ++k) {
    const Vector dbar = total.sum_d[k] / Sd;
    st.mean.push_back(loop.mean_path()[k].Ex + dbar);
    Matrix cov = st.degenerate
                     ? Matrix::Zero(n, n)
                     : Matrix((total.sum_dd[k] - Sd * dbar * dbar.transpose()) / denom);
    cov = linalg::symmetrize(cov);
    const double zbar = total.sum_z[k] / Sd;
    const double zvar =
        st.degenerate ? 0.0 : std::max(0.0, (total.sum_z2[k] - Sd * zbar * zbar) / denom);
    st.weighted_variance.push_back(st.degenerate ? 0.0 : zbar);
    st.weighted_variance_stderr.push_back(std::sqrt(zvar / Sd));
    st.weighted_variance_ensemble.push_back((Qr * cov).trace());
    st.covariance.push_back(std::move(cov));
    st.local_error_cov.push_back(linalg::symmetrize(total.sum_el[k] / Sd));
    st.remote_error_cov.push_back(linalg::symmetrize(total.sum_er[k] / Sd));
    st.second_moment.push_back(total.sum_xx[k] / Sd);
  }
  st.failure_rate = total.failures / (Sd * static_cast<double>(len));

  st.cost_mean = total.sum_c / Sd;
  st.risk_mean = st.degenerate ? 0.0 : total.sum_r / Sd;
  for (double v : st.weighted_variance_ensemble) st.risk_ensemble += v;
  if (!st.degenerate) {
    const double rbar = total.sum_r / Sd;
    const double var_c = std::max(0.0, (total.sum_c2 - Sd * st.cost_mean * st.cost_mean) / denom);
    const double var_r = std::max(0.0, (total.sum_r2 - Sd * rbar * rbar) / denom);
    st.cost_stderr = std::sqrt(var_c / Sd);
    st.risk_stderr = std::sqrt(var_r / Sd);
    st.cost_risk_cov = (total.sum_cr - Sd * st.cost_mean * rbar) / denom;
  }
  return st;
}

InvarianceReport non_gaussian_invariance_check(const ValidatedModel& model,
                                               int horizon, double mu,
                                               const std::vector<NoiseKind>& kinds,
                                               const EnsembleOptions& options,
                                               double dof) {
  InvarianceReport report;
  report.gains_identical = true;
  std::vector<GainSet> reference;
  auto same = [](const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
  };
  for (NoiseKind kind : kinds) {
    const NoiseModel noise = model_noise(model, kind, dof);
    const PolicySchedule policy =
        PolicySchedule::from_solution(solve_finite(model, mu, horizon));
    if (reference.empty()) {
      reference = policy.gains;
    } else {
      for (std::size_t k = 0; k < reference.size(); ++k) {
        const GainSet& a = reference[k];
        const GainSet& b = policy.gains[k];
        if (!same(a.K, b.K) || !same(a.Kbar, b.Kbar) || !same(a.local_gain, b.local_gain)) {
          report.gains_identical = false;
        }
      }
    }
    const ClosedLoop loop(model, policy, noise);
    const EnsembleStats st = ensemble(loop, options);
    report.kinds.push_back(NoiseKindReport{kind, st.cost_mean, st.cost_stderr,
                                           st.risk_mean, st.risk_stderr,
                                           st.mean.back()});
  }
  return report;
}

}  // namespace risklq
