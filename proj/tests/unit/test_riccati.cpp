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
#include "risklq/fixtures.hpp"
#include "risklq/riccati.hpp"

namespace risklq {
namespace {

// Textbook discrete Riccati difference equation, written with explicit inverses.
std::vector<Matrix> standard_riccati(const Matrix& A, const Matrix& B, const Matrix& Q,
                                     const Matrix& R, const Matrix& terminal, int N) {
  std::vector<Matrix> P(static_cast<std::size_t>(N) + 2);
  P.back() = terminal;
  for (int k = N; k >= 0; --k) {
    const Matrix& Pn = P[static_cast<std::size_t>(k) + 1];
    const Matrix H = (B.transpose() * Pn * B + R).inverse();
    P[static_cast<std::size_t>(k)] =
        A.transpose() * Pn * A + Q - A.transpose() * Pn * B * H * B.transpose() * Pn * A;
  }
  return P;
}

double rel_err(const Matrix& a, const Matrix& b) {
  return linalg::max_abs(a - b) / (1.0 + linalg::max_abs(b));
}

SystemModel scalar_remote_only() {
  const Matrix one = Matrix::Identity(1, 1);
  SystemModel s;
  s.A = s.C = s.Q_w = s.Q_v = s.Sigma_init = s.Q = s.G = s.R_remote = one;
  s.B_remote = one;
  s.B_local = Matrix::Zero(1, 0);
  s.R_local = Matrix::Zero(0, 0);
  s.x0_mean = Vector::Zero(1);
  return s;
}

TEST(Riccati, ZeroMultiplierHasNoMeanCorrection) {
  const ValidatedModel m = validate(fixtures::example2());
  const RiccatiSolution sol = solve_finite(m, 0.0, 20);
  for (std::size_t k = 0; k < sol.S.size(); ++k) {
    EXPECT_LT(linalg::max_abs(sol.S[k]), 1e-9 * (1 + sol.Z[k].norm())) << k;
  }
  for (std::size_t k = 0; k < sol.gains.size(); ++k) {
    EXPECT_LT(linalg::max_abs(sol.gains[k].Kbar), 1e-9) << k;
  }
}

TEST(Riccati, ScalarSingleStep) {
  const ValidatedModel m = validate(scalar_remote_only());
  const RiccatiSolution sol = solve_finite(m, 0.0, 0);
  ASSERT_EQ(sol.gains.size(), 1u);
  EXPECT_DOUBLE_EQ(sol.gains[0].Upsilon(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(sol.gains[0].K(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(sol.Z[0](0, 0), 1.5);
  EXPECT_EQ(sol.gains[0].local_gain.rows(), 0);
}

TEST(Riccati, ScalarSingleStepWithRisk) {
  // mu = 1: Z1 = 2, S1 = -1, Upsilon = 3, K = 2/3, Z0 = 2 + 2 - 4/3
  const ValidatedModel m = validate(scalar_remote_only());
  const RiccatiSolution sol = solve_finite(m, 1.0, 0);
  EXPECT_DOUBLE_EQ(sol.gains[0].Upsilon(0, 0), 3.0);
  EXPECT_NEAR(sol.gains[0].K(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(sol.Z[0](0, 0), 8.0 / 3.0, 1e-14);
  // Z + S = 1: M = 2, total gain 1/2, Kbar = 1/2 - 2/3
  EXPECT_NEAR(sol.gains[0].Kbar(0, 0), -1.0 / 6.0, 1e-15);
  EXPECT_NEAR((sol.Z[0] + sol.S[0])(0, 0), 1.5, 1e-14);
}

TEST(Riccati, FluctuationRecursionIndependentOfFailureProbability) {
  const RiccatiSolution a = solve_finite(validate(fixtures::example2(0.1)), 3.0, 15);
  const RiccatiSolution b = solve_finite(validate(fixtures::example2(0.9)), 3.0, 15);
  for (std::size_t k = 0; k < a.Z.size(); ++k) {
    EXPECT_EQ(a.Z[k], b.Z[k]);
    EXPECT_EQ(a.S[k], b.S[k]);
  }
  EXPECT_NE(a.Theta[0], b.Theta[0]);
}

TEST(Riccati, Example2SolvableAcrossMultipliers) {
  const ValidatedModel m = validate(fixtures::example2());
  for (double mu : {0.0, 0.5, 6.25, 100.0, 1e4}) {
    const RiccatiSolution sol = try_solve_finite(m, mu, fixtures::kExample2Horizon);
    EXPECT_TRUE(sol.solvable) << mu;
  }
}

TEST(Riccati, MatchesStandardRiccatiOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const ValidatedModel m = validate(testing::random_model(rng));
    const double mu = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
    const int N = 12;
    const RiccatiSolution sol = solve_finite(m, mu, N);
    const Matrix Qmu = m.Q() + mu * m.Q_risk();
    const auto Z = standard_riccati(m.A(), m.B(), Qmu, m.R(), m.G() + mu * m.Q_risk(), N);
    const auto P = standard_riccati(m.A(), m.B(), m.Q(), m.R(), m.G(), N);
    for (std::size_t k = 0; k < Z.size(); ++k) {
      EXPECT_LT(rel_err(sol.Z[k], Z[k]), 1e-9) << trial << " k=" << k;
      EXPECT_LT(rel_err(sol.Z[k] + sol.S[k], P[k]), 1e-9) << trial << " k=" << k;
    }
    // total mean gain K + Kbar is the standard gain for the mean problem
    for (std::size_t k = 0; k < sol.gains.size(); ++k) {
      const Matrix& Pn = P[k + 1];
      const Matrix total =
          (m.B().transpose() * Pn * m.B() + m.R()).inverse() * m.B().transpose() * Pn * m.A();
      EXPECT_LT(rel_err(sol.gains[k].K + sol.gains[k].Kbar, total), 1e-8) << trial;
    }
  }
}

TEST(Riccati, LocalRecursionMatchesOracleWhenChannelAlwaysFails) {
  // p = 1: Theta = X is a standard Riccati recursion with B_local alone.
  std::mt19937_64 rng(8);
  testing::RandomModelOptions opt;
  opt.allow_no_local = false;
  for (int trial = 0; trial < 20; ++trial) {
    SystemModel s = testing::random_model(rng, opt);
    s.p = 1.0;
    const ValidatedModel m = validate(s);
    const RiccatiSolution sol = solve_finite(m, 0.7, 10);
    const auto X = standard_riccati(m.A(), m.B_local(), m.Q() + 0.7 * m.Q_risk(), m.R_local(),
                                    m.G() + 0.7 * m.Q_risk(), 10);
    for (std::size_t k = 0; k < X.size(); ++k) {
      EXPECT_LT(rel_err(sol.Theta[k], X[k]), 1e-9) << trial << " k=" << k;
    }
  }
}

TEST(Riccati, IteratesArePsd) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const ValidatedModel m = validate(testing::random_model(rng));
    const RiccatiSolution sol = solve_finite(m, 2.0, 15);
    for (std::size_t k = 0; k < sol.Z.size(); ++k) {
      EXPECT_TRUE(linalg::is_psd(sol.Z[k], 1e-8 * (1 + sol.Z[k].norm())));
      EXPECT_TRUE(linalg::is_psd(sol.Theta[k], 1e-8 * (1 + sol.Theta[k].norm())));
      EXPECT_TRUE(linalg::is_psd(sol.Z[k] + sol.S[k], 1e-8 * (1 + sol.Z[k].norm())));
      EXPECT_TRUE(linalg::is_nearly_symmetric(sol.Z[k], 0.0));
    }
  }
}

TEST(Riccati, StepReportsFailingMatrix) {
  const ValidatedModel m = validate(fixtures::example2());
  RiccatiState next = terminal_state(m, 0.0);
  next.Z = -100.0 * Matrix::Identity(2, 2);
  RiccatiState out;
  std::string failed;
  EXPECT_FALSE(riccati_step(m, 0.0, next, out, failed).has_value());
  EXPECT_EQ(failed, "Upsilon");

  next = terminal_state(m, 0.0);
  next.Theta = -100.0 * Matrix::Identity(2, 2);
  failed.clear();
  EXPECT_FALSE(riccati_step(m, 0.0, next, out, failed).has_value());
  EXPECT_EQ(failed, "Lambda");
}

TEST(Riccati, RejectsNegativeMultiplierAndHorizon) {
  const ValidatedModel m = validate(fixtures::example2());
  EXPECT_THROW(solve_finite(m, -1.0, 3), Error);
  EXPECT_THROW(solve_finite(m, 1.0, -1), Error);
  EXPECT_THROW(solve_stationary(m, -0.1), Error);
}

TEST(Riccati, GainsIgnoreNoiseStatistics) {
  SystemModel s = fixtures::example2();
  const RiccatiSolution a = solve_finite(validate(s), 1.5, 10);
  s.Q_w = 7.0 * Matrix::Identity(2, 2);
  s.Q_v = 0.1 * Matrix::Identity(2, 2);
  s.Sigma_init = 3.0 * Matrix::Identity(2, 2);
  s.x0_mean = Vector::Constant(2, -2.0);
  const RiccatiSolution b = solve_finite(validate(s), 1.5, 10);
  for (std::size_t k = 0; k < a.gains.size(); ++k) {
    EXPECT_EQ(a.gains[k].K, b.gains[k].K);
    EXPECT_EQ(a.gains[k].Kbar, b.gains[k].Kbar);
    EXPECT_EQ(a.gains[k].local_gain, b.gains[k].local_gain);
  }
}

TEST(Riccati, CostToGoGrowsWithHorizonWithoutTerminalWeight) {
  SystemModel s = fixtures::example2();
  s.G = Matrix::Zero(2, 2);
  const ValidatedModel m = validate(s);
  Matrix prev = Matrix::Zero(2, 2);
  for (int N = 0; N <= 10; ++N) {
    const RiccatiSolution sol = solve_finite(m, 0.5, N);
    EXPECT_TRUE(linalg::is_psd(sol.Z[0] - prev, 1e-9 * (1 + prev.norm()))) << N;
    prev = sol.Z[0];
  }
}

TEST(Stationary, ScalarMatchesLongFiniteHorizon) {
  ValidationOptions vo;
  vo.allow_singular_measurement_noise = true;
  const ValidatedModel m = validate(fixtures::scalar_perfect_information(), vo);
  const StationarySolution st = solve_stationary(m, 0.8);
  const RiccatiSolution fin = solve_finite(m, 0.8, 500);
  EXPECT_TRUE(st.converged);
  EXPECT_NEAR(st.Z(0, 0), fin.Z[0](0, 0), 1e-8 * st.Z(0, 0));
  EXPECT_NEAR((st.Z + st.S)(0, 0), (fin.Z[0] + fin.S[0])(0, 0), 1e-8 * st.Z(0, 0));
  // closed form of the scalar algebraic equation
  const double a = 1.2, b = 1.0, q = 1.0 + 0.8, r = 0.5;
  const double c2 = b * b;
  // z = a^2 z + q - a^2 b^2 z^2 / (b^2 z + r)
  const double A2 = c2;
  const double B2 = r - a * a * r - q * c2;
  const double C2 = -q * r;
  const double z = (-B2 + std::sqrt(B2 * B2 - 4 * A2 * C2)) / (2 * A2);
  EXPECT_NEAR(st.Z(0, 0), z, 1e-8 * z);
}

TEST(Stationary, FiniteHorizonApproachesStationary) {
  const ValidatedModel m = validate(fixtures::example1());
  const StationarySolution st = solve_stationary(m, 10.0);
  const RiccatiSolution fin = solve_finite(m, 10.0, 500);
  EXPECT_LT(linalg::max_abs(fin.Z[0] - st.Z), 1e-6);
  EXPECT_LT(linalg::max_abs(fin.Theta[0] - st.Theta), 1e-6);
  EXPECT_LT(linalg::max_abs(fin.gains[0].K - st.gains.K), 1e-6);
  EXPECT_LT(st.residual_Z, 1e-6);
  EXPECT_LT(st.residual_X, 1e-6);
  EXPECT_LT(st.residual_S, 1e-6);
}

TEST(Stationary, UncontrolledUnstablePlantDiverges) {
  SystemModel s = fixtures::example1();
  s.B_local.setZero();
  s.B_remote.setZero();
  const ValidatedModel m = validate(s);
  try {
    solve_stationary(m, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDiverged);
  }
  const BoundednessVerdict v = boundedness_verdict(m, 0.0);
  EXPECT_TRUE(v.diverged);
  EXPECT_FALSE(v.ms_bounded);
}

TEST(Stationary, IterationCapReportsDivergence) {
  StationaryOptions opt;
  opt.max_iter = 2;
  try {
    solve_stationary(validate(fixtures::example1()), 0.0, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDiverged);
  }
}

TEST(Stationary, SweepVerdictFlipsAtThreshold) {
  for (double p : {0.0, 0.3, 0.6, 0.75, 0.8}) {
    const BoundednessVerdict v = boundedness_verdict(validate(fixtures::boundedness_sweep(p)), 0.0);
    EXPECT_TRUE(v.ms_bounded) << p << " " << v.reason;
  }
  for (double p : {0.85, 0.95, 1.0}) {
    const BoundednessVerdict v = boundedness_verdict(validate(fixtures::boundedness_sweep(p)), 0.0);
    EXPECT_FALSE(v.ms_bounded) << p;
  }
}

TEST(Stationary, Example1BoundedAtBothReportedProbabilities) {
  for (double p : {0.2, 0.8}) {
    const StationarySolution st = solve_stationary(validate(fixtures::example1(p)), 0.0);
    EXPECT_TRUE(st.ms_bounded) << p;
    EXPECT_LT(st.remote.spectral_value, 1.0);
  }
}

}  // namespace
}  // namespace risklq
