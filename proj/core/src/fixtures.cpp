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
#include "risklq/fixtures.hpp"

namespace risklq::fixtures {
namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

SystemModel two_state_base(double p) {
  const Matrix I = Matrix::Identity(2, 2);
  SystemModel m;
  m.B_local = mat2(1, 1, 0, 1);
  m.B_remote = mat2(1, 0, 1, 1);
  m.C = mat2(1, 1, 0, -1);
  m.Q = I;
  m.R_local = I;
  m.R_remote = I;
  m.G = I;
  m.Sigma_init = I;
  m.p = p;
  return m;
}

}  // namespace

SystemModel example1(double p) {
  SystemModel m = two_state_base(p);
  m.A = mat2(4, 1, 1, 0.1);
  m.Q_w = 10.0 * Matrix::Identity(2, 2);
  m.Q_v = 10.0 * Matrix::Identity(2, 2);
  m.x0_mean = Vector::Ones(2);
  m.epsilon = 0.0;
  return m;
}

SystemModel example2(double p) {
  SystemModel m = two_state_base(p);
  m.A = mat2(2, 0.1, 1, 0.1);
  m.Q_w = Matrix::Identity(2, 2);
  m.Q_v = Matrix::Identity(2, 2);
  m.x0_mean = Vector::Zero(2);
  m.epsilon = kExample2Epsilon;
  return m;
}

SystemModel boundedness_sweep(double p) {
  const Matrix I = Matrix::Identity(2, 2);
  SystemModel m;
  m.A = mat2(1.1, 0, 0, 0.5);
  m.B_local = Matrix(2, 1);
  m.B_local << 0, 1;
  m.B_remote = Matrix(2, 1);
  m.B_remote << 1, 0;
  m.C = I;
  m.Q_w = I;
  m.Q_v = I;
  m.Q = I;
  m.R_local = Matrix::Identity(1, 1);
  m.R_remote = Matrix::Identity(1, 1);
  m.G = I;
  m.p = p;
  m.x0_mean = Vector::Zero(2);
  m.Sigma_init = I;
  m.epsilon = 0.0;
  return m;
}

SystemModel scalar_perfect_information(double a) {
  const Matrix one = Matrix::Identity(1, 1);
  SystemModel m;
  m.A = a * one;
  m.B_local = Matrix(1, 0);
  m.B_remote = one;
  m.C = one;
  m.Q_w = 0.5 * one;
  m.Q_v = Matrix::Zero(1, 1);
  m.Q = one;
  m.R_local = Matrix(0, 0);
  m.R_remote = 0.5 * one;
  m.G = 2.0 * one;
  m.p = 0.0;
  m.x0_mean = Vector::Constant(1, 1.0);
  m.Sigma_init = 0.3 * one;
  m.epsilon = 0.0;
  return m;
}

}  // namespace risklq::fixtures
