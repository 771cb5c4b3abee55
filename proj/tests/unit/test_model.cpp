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
#include "risklq/model.hpp"

namespace risklq {
namespace {

template <class Fn>
ErrorKind kind_of(Fn&& fn, std::string* subject = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (subject) *subject = e.subject();
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kIo;
}

TEST(Model, Example2IsValidAndDetectable) {
  const ValidatedModel m = validate(fixtures::example2());
  EXPECT_TRUE(m.detectable());
  EXPECT_EQ(m.n(), 2);
  EXPECT_EQ(m.m(), 4);
  EXPECT_DOUBLE_EQ(m.p(), 0.5);
}

TEST(Model, SingularLocalWeightIsRejected) {
  SystemModel s = fixtures::example2();
  s.R_local(1, 1) = 0.0;
  std::string subject;
  EXPECT_EQ(kind_of([&] { validate(s); }, &subject), ErrorKind::kNotPD);
  EXPECT_EQ(subject, "R_local");
}

TEST(Model, ProbabilityAboveOne) {
  SystemModel s = fixtures::example2();
  s.p = 1.2;
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kProbabilityOutOfRange);
  s.p = -0.1;
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kProbabilityOutOfRange);
}

TEST(Model, NegativeEpsilon) {
  SystemModel s = fixtures::example2();
  s.epsilon = -1.0;
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kInvalidArgument);
}

TEST(Model, DimensionMismatch) {
  SystemModel s = fixtures::example2();
  s.C = Matrix::Ones(2, 3);
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kDimensionMismatch);
  s = fixtures::example2();
  s.x0_mean = Vector::Zero(3);
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kDimensionMismatch);
}

TEST(Model, IndefiniteCovariance) {
  SystemModel s = fixtures::example2();
  s.Q_w(0, 0) = -1.0;
  std::string subject;
  EXPECT_EQ(kind_of([&] { validate(s); }, &subject), ErrorKind::kNotPSD);
  EXPECT_EQ(subject, "Q_w");
}

TEST(Model, SingularMeasurementNoiseNeedsOptIn) {
  SystemModel s = fixtures::example2();
  s.Q_v = Matrix::Zero(2, 2);
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kNotPD);
  ValidationOptions opt;
  opt.allow_singular_measurement_noise = true;
  EXPECT_NO_THROW(validate(s, opt));
}

TEST(Model, SymmetrizesRoundOffOnly) {
  SystemModel s = fixtures::example2();
  s.Q(0, 1) = 1e-12;
  const ValidatedModel m = validate(s);
  EXPECT_EQ(m.Q()(0, 1), m.Q()(1, 0));
  s.Q(0, 1) = 0.5;
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kNotSymmetric);
}

TEST(Model, RiskWeightDefaultsToStateWeight) {
  SystemModel s = fixtures::example2();
  s.Q = 2.0 * Matrix::Identity(2, 2);
  const ValidatedModel m = validate(s);
  EXPECT_TRUE(m.Q_risk().isApprox(s.Q));
  s.Q_risk = Matrix::Identity(2, 2);
  EXPECT_TRUE(validate(s).Q_risk().isApprox(Matrix::Identity(2, 2)));
}

TEST(Model, StackExample2) {
  const StackedInputModel st = stack_inputs(validate(fixtures::example2()));
  Matrix B(2, 4);
  B << 1, 1, 1, 0, 0, 1, 1, 1;
  EXPECT_EQ(st.B, B);
  EXPECT_EQ(st.R, Matrix::Identity(4, 4));
}

TEST(Model, StackWithoutLocalInput) {
  SystemModel s = fixtures::example2();
  s.B_local = Matrix(2, 0);
  s.R_local = Matrix(0, 0);
  const ValidatedModel m = validate(s);
  const StackedInputModel st = stack_inputs(m);
  EXPECT_EQ(st.B, s.B_remote);
  EXPECT_EQ(st.R, s.R_remote);
  EXPECT_EQ(m.m_local(), 0);
}

TEST(Model, StackScalar) {
  SystemModel s = fixtures::example2();
  const Matrix one = Matrix::Identity(1, 1);
  s.A = one;
  s.B_local = one;
  s.B_remote = one;
  s.C = one;
  s.Q_w = s.Q_v = s.Q = s.G = s.Sigma_init = one;
  s.R_local = s.R_remote = one;
  s.x0_mean = Vector::Zero(1);
  const StackedInputModel st = stack_inputs(validate(s));
  EXPECT_EQ(st.B, Matrix::Ones(1, 2));
  EXPECT_EQ(st.R, Matrix::Identity(2, 2));
}

TEST(Model, ValidateIsIdempotent) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const ValidatedModel once = validate(testing::random_model(rng));
    const ValidatedModel twice = validate(once);
    EXPECT_EQ(once.A(), twice.A());
    EXPECT_EQ(once.Q(), twice.Q());
    EXPECT_EQ(once.Q_risk(), twice.Q_risk());
    EXPECT_EQ(once.B(), twice.B());
    EXPECT_EQ(once.R(), twice.R());
    EXPECT_EQ(once.detectable(), twice.detectable());
    EXPECT_EQ(once.observable(), twice.observable());
  }
}

TEST(Model, StackedDimensionsOnRandomInstances) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const ValidatedModel m = validate(testing::random_model(rng));
    const StackedInputModel st = stack_inputs(m);
    ASSERT_EQ(st.B.cols(), m.m_local() + m.m_remote());
    ASSERT_EQ(st.R.rows(), st.B.cols());
    ASSERT_EQ(st.R.cols(), st.B.cols());
    EXPECT_EQ(st.B.leftCols(m.m_local()), m.B_local());
    EXPECT_TRUE(st.R.topRightCorner(m.m_local(), m.m_remote()).isZero(0.0));
    EXPECT_TRUE(st.R.bottomLeftCorner(m.m_remote(), m.m_local()).isZero(0.0));
  }
}

TEST(Model, UndetectablePairIsRecorded) {
  SystemModel s = fixtures::example2();
  s.A = Matrix::Identity(2, 2) * 2.0;
  s.C = Matrix(1, 2);
  s.C << 1, 0;
  s.Q_v = Matrix::Identity(1, 1);
  EXPECT_FALSE(validate(s).detectable());
}

TEST(Model, ChangeFailureProbability) {
  const ValidatedModel m = validate(fixtures::example1());
  const ValidatedModel m2 = with_failure_probability(m, 0.2);
  EXPECT_DOUBLE_EQ(m2.p(), 0.2);
  EXPECT_EQ(m2.A(), m.A());
  EXPECT_THROW(with_failure_probability(m, 1.5), Error);
}

}  // namespace
}  // namespace risklq
