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

// Independent reference computations used by the tests. Nothing here calls
// into the solver except to build inputs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "risklq/model.hpp"

namespace risklq::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c,
                            double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

inline Matrix random_psd(std::mt19937_64& rng, Eigen::Index n, double shift) {
  const Matrix f = random_matrix(rng, n, n, 0.7);
  return f * f.transpose() + shift * Matrix::Identity(n, n);
}

struct RandomModelOptions {
  bool allow_no_local = true;
  bool singular_weights = true;  ///< Q, G may be singular
};

/// Random instance with n in 1..3, m_local in 0..2, m_remote in 1..2.
inline SystemModel random_model(std::mt19937_64& rng, const RandomModelOptions& opt = {}) {
  std::uniform_int_distribution<int> dn(1, 3);
  std::uniform_int_distribution<int> dm1(opt.allow_no_local ? 0 : 1, 2);
  std::uniform_int_distribution<int> dm2(1, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::Index n = dn(rng);
  const Eigen::Index m1 = dm1(rng);
  const Eigen::Index m2 = dm2(rng);
  const Eigen::Index q = dn(rng);
  SystemModel m;
  m.A = random_matrix(rng, n, n, 0.8);
  m.B_local = random_matrix(rng, n, m1);
  m.B_remote = random_matrix(rng, n, m2);
  m.C = random_matrix(rng, q, n);
  m.Q_w = random_psd(rng, n, 0.1);
  m.Q_v = random_psd(rng, q, 0.2);
  m.Q = random_psd(rng, n, opt.singular_weights ? 0.0 : 0.1);
  if (u(rng) < 0.5) m.Q_risk = random_psd(rng, n, 0.05);
  m.R_local = random_psd(rng, m1, 0.3);
  m.R_remote = random_psd(rng, m2, 0.3);
  m.G = random_psd(rng, n, opt.singular_weights ? 0.0 : 0.1);
  m.p = u(rng);
  m.x0_mean = random_matrix(rng, n, 1);
  m.Sigma_init = random_psd(rng, n, 0.1);
  m.epsilon = 10.0 * u(rng);
  return m;
}

/// Plain Nelder-Mead with adaptive restarts around the incumbent.
inline std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x0, double step, double ftol,
                                       int max_iter, int restarts = 6) {
  const std::size_t d = x0.size();
  std::vector<double> best = std::move(x0);
  for (int r = 0; r < restarts; ++r) {
    std::vector<std::vector<double>> s(d + 1, best);
    for (std::size_t i = 0; i < d; ++i) s[i + 1][i] += step;
    std::vector<double> fs(d + 1);
    for (std::size_t i = 0; i <= d; ++i) fs[i] = f(s[i]);
    for (int it = 0; it < max_iter; ++it) {
      std::vector<std::size_t> idx(d + 1);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fs[a] < fs[b]; });
      std::vector<std::vector<double>> s2;
      std::vector<double> f2;
      for (auto i : idx) {
        s2.push_back(s[i]);
        f2.push_back(fs[i]);
      }
      s = std::move(s2);
      fs = std::move(f2);
      if (std::abs(fs[d] - fs[0]) <= ftol * (1.0 + std::abs(fs[0]))) break;
      std::vector<double> c(d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) c[j] += s[i][j] / static_cast<double>(d);
      auto along = [&](double t) {
        std::vector<double> x(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = c[j] + t * (s[d][j] - c[j]);
        return x;
      };
      const auto xr = along(-1.0);
      const double fr = f(xr);
      if (fr < fs[0]) {
        const auto xe = along(-2.0);
        const double fe = f(xe);
        if (fe < fr) {
          s[d] = xe;
          fs[d] = fe;
        } else {
          s[d] = xr;
          fs[d] = fr;
        }
      } else if (fr < fs[d - 1]) {
        s[d] = xr;
        fs[d] = fr;
      } else {
        const auto xc = fr < fs[d] ? along(-0.5) : along(0.5);
        const double fc = f(xc);
        if (fc < std::min(fr, fs[d])) {
          s[d] = xc;
          fs[d] = fc;
        } else {
          for (std::size_t i = 1; i <= d; ++i) {
            for (std::size_t j = 0; j < d; ++j) s[i][j] = s[0][j] + 0.5 * (s[i][j] - s[0][j]);
            fs[i] = f(s[i]);
          }
        }
      }
    }
    const auto it = std::min_element(fs.begin(), fs.end());
    best = s[static_cast<std::size_t>(it - fs.begin())];
    step *= 0.3;
  }
  return best;
}

/// Augmented cost of u_k = -a_k x_k - b_k E x_k for a scalar plant
/// x+ = A x + B u + w with the state known exactly (p irrelevant).
/// Coefficients are ordered (a_0, b_0, a_1, b_1, ...).
struct ScalarPlant {
  double A, B, Q, Q_risk, R, G, Q_w, x0_mean, Sigma_init;
};

inline double scalar_augmented_cost(const ScalarPlant& s, const std::vector<double>& coef,
                                    double mu) {
  const std::size_t N1 = coef.size() / 2;  // steps 0..N
  double m = s.x0_mean;
  double v = s.Sigma_init;
  double J = 0.0;
  double JR = 0.0;
  for (std::size_t k = 0; k < N1; ++k) {
    const double a = coef[2 * k];
    const double b = coef[2 * k + 1];
    J += s.Q * (v + m * m) + s.R * (a * a * v + (a + b) * (a + b) * m * m);
    JR += s.Q_risk * v;
    v = (s.A - s.B * a) * (s.A - s.B * a) * v + s.Q_w;
    m = (s.A - s.B * (a + b)) * m;
  }
  J += s.G * (v + m * m);
  JR += s.Q_risk * v;
  return J + mu * JR;
}

}  // namespace risklq::testing
