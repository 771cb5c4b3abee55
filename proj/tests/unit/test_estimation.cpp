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
#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "risklq/error.hpp"
#include "risklq/estimation.hpp"
#include "risklq/evaluation.hpp"
#include "risklq/fixtures.hpp"
#include "risklq/riccati.hpp"
#include "risklq/simulate.hpp"

namespace risklq {
namespace {

ValidationOptions singular_ok() {
  ValidationOptions o;
  o.allow_singular_measurement_noise = true;
  return o;
}

SystemModel scalar_filter_model() {
  const Matrix one = Matrix::Identity(1, 1);
  SystemModel s;
  s.A = s.C = s.Q_w = s.Q_v = s.Sigma_init = one;
  s.B_local = s.B_remote = one;
  s.Q = s.G = s.R_local = s.R_remote = one;
  s.x0_mean = Vector::Zero(1);
  s.p = 0.5;
  return s;
}

TEST(CovarianceSchedule, PerfectObservation) {
  SystemModel s = fixtures::example1();
  s.C = Matrix::Identity(2, 2);
  s.Q_v = Matrix::Zero(2, 2);
  const ValidatedModel m = validate(s, singular_ok());
  const CovarianceSchedule cs = covariance_schedule(m, 6);
  ASSERT_EQ(cs.Sigma_filt.size(), 8u);
  for (std::size_t k = 0; k < cs.W.size(); ++k) {
    EXPECT_TRUE(cs.W[k].isApprox(Matrix::Identity(2, 2), 1e-12)) << k;
    EXPECT_LT(linalg::max_abs(cs.Sigma_filt[k]), 1e-12) << k;
  }
}

TEST(CovarianceSchedule, ScalarArithmetic) {
  const ValidatedModel m = validate(scalar_filter_model());
  const CovarianceSchedule cs = covariance_schedule(m, 0);
  EXPECT_DOUBLE_EQ(cs.Sigma_pred[0](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(cs.W[0](0, 0), 0.5);
  EXPECT_DOUBLE_EQ(cs.Sigma_filt[0](0, 0), 0.5);
  EXPECT_DOUBLE_EQ(cs.Sigma_pred[1](0, 0), 1.5);
}

TEST(CovarianceSchedule, ConvergesToFixedPointOnExample1) {
  const ValidatedModel m = validate(fixtures::example1());
  const CovarianceSchedule cs = covariance_schedule(m, 50);
  // oracle: iterate the prediction and the standard update directly
  const Matrix& A = m.A();
  const Matrix& C = m.C();
  Matrix P = m.Sigma_init();
  Matrix F;
  for (int i = 0; i < 5000; ++i) {
    const Matrix W = P * C.transpose() * (C * P * C.transpose() + m.Q_v()).inverse();
    F = (Matrix::Identity(2, 2) - W * C) * P;
    P = A * F * A.transpose() + m.Q_w();
  }
  EXPECT_LT(linalg::max_abs(cs.Sigma_filt.back() - F), 1e-8 * F.norm());
  const StationaryLocalCovariance st = stationary_local_covariance(m);
  EXPECT_TRUE(st.converged);
  EXPECT_LT(linalg::max_abs(st.Sigma_filt - F), 1e-8 * F.norm());
}

TEST(CovarianceSchedule, PsdAndFilteringShrinks) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    const ValidatedModel m = validate(testing::random_model(rng));
    const CovarianceSchedule cs = covariance_schedule(m, 10);
    for (std::size_t k = 0; k < cs.Sigma_filt.size(); ++k) {
      EXPECT_GE(linalg::symmetric_eigenvalues(cs.Sigma_filt[k]).minCoeff(), -1e-8);
      EXPECT_GE(linalg::symmetric_eigenvalues(cs.Sigma_pred[k]).minCoeff(), -1e-8);
      EXPECT_GE(linalg::symmetric_eigenvalues(cs.Sigma_pred[k] - cs.Sigma_filt[k]).minCoeff(),
                -1e-8 * (1.0 + cs.Sigma_pred[k].norm()));
      // the correction covariance equals the covariance reduction
      EXPECT_LT(linalg::max_abs(cs.update_cov[k] - (cs.Sigma_pred[k] - cs.Sigma_filt[k])),
                1e-9 * (1.0 + cs.Sigma_pred[k].norm()));
    }
  }
}

TEST(CovarianceSchedule, IndependentOfMeanAndWeights) {
  SystemModel s = fixtures::example2();
  const CovarianceSchedule a = covariance_schedule(validate(s), 8);
  s.x0_mean = Vector::Constant(2, 3.0);
  s.Q = 5.0 * Matrix::Identity(2, 2);
  s.R_remote = 2.0 * Matrix::Identity(2, 2);
  const CovarianceSchedule b = covariance_schedule(validate(s), 8);
  for (std::size_t k = 0; k < a.W.size(); ++k) {
    EXPECT_EQ(a.W[k], b.W[k]);
    EXPECT_EQ(a.Sigma_filt[k], b.Sigma_filt[k]);
  }
}

TEST(CovarianceSchedule, RankDeficientInnovationUsesPseudoInverse) {
  SystemModel s = fixtures::example2();
  s.C = Matrix::Ones(2, 2);
  s.Q_v = Matrix::Zero(2, 2);
  const CovarianceSchedule cs = covariance_schedule(validate(s, singular_ok()), 4);
  for (const auto& W : cs.W) EXPECT_TRUE(W.allFinite());
  for (const auto& S : cs.Sigma_filt) EXPECT_TRUE(linalg::is_psd(S));
}

TEST(LocalFilter, ZeroInnovationKeepsPrediction) {
  const ValidatedModel m = validate(fixtures::example2());
  const CovarianceSchedule cs = covariance_schedule(m, 3);
  EstimatorState st = initial_estimator_state(m);
  st = local_filter_step(m, st, cs, m.C() * m.x0_mean(), Vector::Zero(4), Vector::Zero(2));
  EXPECT_EQ(st.xhat_local, st.xhat_local_pred);
  st = remote_estimator_step(m, st, true, Vector::Zero(4));
  Vector U(4);
  U << 1, -1, 0.5, 2;
  const Vector ut = Vector::Constant(2, 0.25);
  const Vector pred = m.A() * st.xhat_local + m.B() * U + m.B_local() * ut;
  st = local_filter_step(m, st, cs, m.C() * pred, U, ut);
  EXPECT_TRUE(st.xhat_local.isApprox(pred, 1e-14));
  EXPECT_TRUE(st.xhat_local_pred.isApprox(pred, 1e-14));
}

TEST(LocalFilter, ZeroGainInjected) {
  const ValidatedModel m = validate(fixtures::example2());
  CovarianceSchedule cs = covariance_schedule(m, 2);
  for (auto& W : cs.W) W.setZero();
  EstimatorState st = initial_estimator_state(m);
  st = local_filter_step(m, st, cs, Vector::Constant(2, 7.0), Vector::Zero(4), Vector::Zero(2));
  EXPECT_EQ(st.xhat_local, st.xhat_local_pred);
}

TEST(LocalFilter, ScalarUpdate) {
  const ValidatedModel m = validate(scalar_filter_model());
  const CovarianceSchedule cs = covariance_schedule(m, 0);
  EstimatorState st = initial_estimator_state(m);
  st = local_filter_step(m, st, cs, Vector::Constant(1, 2.0), Vector::Zero(2), Vector::Zero(1));
  EXPECT_DOUBLE_EQ(st.xhat_local(0), 1.0);
}

TEST(LocalFilter, HorizonAndOrderChecks) {
  const ValidatedModel m = validate(scalar_filter_model());
  const CovarianceSchedule cs = covariance_schedule(m, 0);
  EstimatorState st = initial_estimator_state(m);
  const Vector y = Vector::Zero(1);
  st = local_filter_step(m, st, cs, y, Vector::Zero(2), Vector::Zero(1));
  EXPECT_THROW(local_filter_step(m, st, cs, y, Vector::Zero(2), Vector::Zero(1)), Error);
  st = remote_estimator_step(m, st, true, Vector::Zero(2));
  st = local_filter_step(m, st, cs, y, Vector::Zero(2), Vector::Zero(1));
  st = remote_estimator_step(m, st, true, Vector::Zero(2));
  try {
    local_filter_step(m, st, cs, y, Vector::Zero(2), Vector::Zero(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kHorizonMismatch);
  }
}

TEST(RemoteEstimator, DeliveredPacketCopiesLocal) {
  const ValidatedModel m = validate(fixtures::example2());
  const CovarianceSchedule cs = covariance_schedule(m, 2);
  EstimatorState st = initial_estimator_state(m);
  st = local_filter_step(m, st, cs, Vector::Constant(2, 1.5), Vector::Zero(4), Vector::Zero(2));
  st = remote_estimator_step(m, st, true, Vector::Zero(4));
  EXPECT_EQ(st.xhat_remote, st.xhat_local);
}

TEST(RemoteEstimator, LostPacketKeepsPrediction) {
  SystemModel s = fixtures::example2();
  s.A = Matrix::Identity(2, 2);
  const ValidatedModel m = validate(s);
  const CovarianceSchedule cs = covariance_schedule(m, 2);
  EstimatorState st = initial_estimator_state(m);
  st = local_filter_step(m, st, cs, Vector::Constant(2, 1.5), Vector::Zero(4), Vector::Zero(2));
  st = remote_estimator_step(m, st, true, Vector::Zero(4));
  const Vector before = st.xhat_remote;
  st = local_filter_step(m, st, cs, Vector::Constant(2, -4.0), Vector::Zero(4), Vector::Zero(2));
  st = remote_estimator_step(m, st, false, Vector::Zero(4));
  EXPECT_EQ(st.xhat_remote, before);
  EXPECT_NE(st.xhat_local, before);
}

TEST(RemoteEstimator, PerfectChannelTracksLocal) {
  const ValidatedModel m = validate(fixtures::example2(0.0));
  const PolicySchedule pol = PolicySchedule::from_solution(solve_finite(m, 1.0, 12));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Trajectory t = simulate_trajectory(m, pol, model_noise(m), seed);
    for (std::size_t k = 0; k < t.x.size(); ++k) EXPECT_EQ(t.xhat_remote[k], t.xhat_local[k]);
  }
}

GainSet gains_with_local(const Matrix& local_gain) {
  GainSet g;
  g.local_gain = local_gain;
  return g;
}

TEST(RemoteCovariance, PerfectChannelLimitEqualsLocal) {
  const ValidatedModel m = validate(fixtures::example1(0.0));
  const StationarySolution st = solve_stationary(m, 0.0);
  const RemoteCovarianceAssessment a = remote_covariance_assessment(m, st.gains);
  EXPECT_EQ(a.spectral_value, 0.0);
  EXPECT_TRUE(a.converges);
  ASSERT_TRUE(a.Sigma_R_limit.has_value());
  EXPECT_LT(linalg::max_abs(*a.Sigma_R_limit - a.Sigma_L_limit), 1e-10);
}

TEST(RemoteCovariance, DivergentCriterion) {
  SystemModel s = scalar_filter_model();
  s.A = 1.2 * Matrix::Identity(1, 1);
  s.p = 1.0;
  const ValidatedModel m = validate(s);
  const RemoteCovarianceAssessment a =
      remote_covariance_assessment(m, gains_with_local(Matrix::Zero(1, 1)));
  EXPECT_NEAR(a.spectral_value, 1.2, 1e-12);
  EXPECT_FALSE(a.converges);
  EXPECT_FALSE(a.Sigma_R_limit.has_value());
}

TEST(RemoteCovariance, Example1OrderingAgainstMonteCarlo) {
  double traces[2];
  int i = 0;
  for (double p : {0.2, 0.8}) {
    const ValidatedModel m = validate(fixtures::example1(p));
    const StationarySolution st = solve_stationary(m, 0.0);
    ASSERT_TRUE(st.remote.converges);
    ASSERT_TRUE(st.remote.Sigma_R_limit.has_value());
    traces[i] = st.remote.Sigma_R_limit->trace();
    const ClosedLoop loop(m, PolicySchedule::stationary(st, 40), model_noise(m));
    const EnsembleStats es = ensemble(loop, EnsembleOptions{10000, 77, 0});
    double mc = 0.0;
    for (std::size_t k = 20; k < es.remote_error_cov.size(); ++k) mc += es.remote_error_cov[k].trace();
    mc /= static_cast<double>(es.remote_error_cov.size() - 20);
    EXPECT_NEAR(mc, traces[i], 0.05 * traces[i]) << "p=" << p;
    ++i;
  }
  EXPECT_LT(traces[0], traces[1]);
}

TEST(RemoteCovariance, FiniteHorizonMatchesMomentsAndMonteCarlo) {
  const ValidatedModel m = validate(fixtures::example2());
  const RiccatiSolution sol = solve_finite(m, 2.0, 8);
  const CovarianceSchedule cs = covariance_schedule(m, 8);
  const std::vector<Matrix> sr = remote_error_covariance(m, cs, sol.local_gains());
  const PolicySchedule pol = PolicySchedule::from_solution(sol);
  const PolicyMoments pm = policy_moments(m, pol, cs);
  const EnsembleStats es = ensemble(ClosedLoop(m, pol, model_noise(m)), EnsembleOptions{20000, 3, 0});
  for (std::size_t k = 0; k < sr.size(); ++k) {
    EXPECT_LT(linalg::max_abs(sr[k] - (pm.local_error[k] + pm.gap[k])), 1e-9 * (1 + sr[k].norm()));
    EXPECT_NEAR(es.remote_error_cov[k].trace(), sr[k].trace(), 0.05 * sr[k].trace()) << k;
  }
}

TEST(Estimation, LocalErrorCovarianceMatchesMonteCarlo) {
  const ValidatedModel m = validate(fixtures::example1());
  const PolicySchedule pol = PolicySchedule::from_solution(solve_finite(m, 0.0, 20));
  const ClosedLoop loop(m, pol, model_noise(m));
  const EnsembleStats es = ensemble(loop, EnsembleOptions{10000, 9, 0});
  for (std::size_t k = 0; k < es.local_error_cov.size(); ++k) {
    const Matrix& ref = loop.schedule().Sigma_filt[k];
    EXPECT_LT((es.local_error_cov[k] - ref).norm(), 0.05 * ref.norm()) << k;
  }
}

TEST(Estimation, LocalEstimateAveragesToRemoteOnLostPackets) {
  // E[xhat_L - xhat_R | remote information] = 0; check the consequence that
  // the gap averages to zero over trajectories whose packet was lost.
  const ValidatedModel m = validate(fixtures::example2());
  const PolicySchedule pol = PolicySchedule::from_solution(solve_finite(m, 1.0, 6));
  const ClosedLoop loop(m, pol, model_noise(m));
  const std::size_t S = 20000;
  const std::size_t k = 4;
  Vector sum = Vector::Zero(2);
  Vector sum2 = Vector::Zero(2);
  double count = 0.0;
  for (std::size_t i = 0; i < S; ++i) {
    const Trajectory t = loop.simulate(derive_seed(123, i));
    if (t.eta[k] != 0) continue;
    const Vector g = t.xhat_local[k] - t.xhat_remote[k];
    sum += g;
    sum2 += g.cwiseProduct(g);
    count += 1.0;
  }
  ASSERT_GT(count, 1000.0);
  const Vector mean = sum / count;
  const Vector se = ((sum2 / count - mean.cwiseProduct(mean)) / count).cwiseSqrt();
  for (int j = 0; j < 2; ++j) EXPECT_LT(std::abs(mean(j)), 4.0 * se(j));
}

}  // namespace
}  // namespace risklq
