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
#include "risklq/riccati.hpp"

#include <algorithm>
#include <cmath>

#include "risklq/error.hpp"

namespace risklq {

std::vector<Matrix> RiccatiSolution::local_gains() const {
  std::vector<Matrix> out;
  out.reserve(gains.size());
  for (const auto& g : gains) out.push_back(g.local_gain);
  return out;
}

RiccatiState terminal_state(const ValidatedModel& model, double mu) {
  RiccatiState s;
  s.Z = model.G() + mu * model.Q_risk();
  s.X = s.Z;
  s.Theta = s.Z;
  s.S = -mu * model.Q_risk();
  return s;
}

std::optional<GainSet> riccati_step(const ValidatedModel& model, double mu,
                                    const RiccatiState& next, RiccatiState& out,
                                    std::string& failed) {
  const Matrix& A = model.A();
  const Matrix& B = model.B();
  const Matrix& BL = model.B_local();
  const Matrix Bt = B.transpose();
  const Matrix At = A.transpose();

  GainSet g;
  g.Upsilon = linalg::symmetrize(Bt * next.Z * B + model.R());
  const Matrix BtZA = Bt * next.Z * A;
  auto K = linalg::spd_solve(g.Upsilon, BtZA);
  if (!K) {
    failed = "Upsilon";
    return std::nullopt;
  }
  g.K = std::move(*K);

  const Matrix ZS = next.Z + next.S;
  g.M = linalg::symmetrize(Bt * ZS * B + model.R());
  g.Nmat = Bt * ZS * A;
  auto MinvN = linalg::spd_solve(g.M, g.Nmat);
  if (!MinvN) {
    failed = "M";
    return std::nullopt;
  }
  g.Kbar = *MinvN - g.K;

  g.Lambda = linalg::symmetrize(BL.transpose() * next.Theta * BL + model.R_local());
  g.L = BL.transpose() * next.Theta * A;
  auto Gamma = linalg::spd_solve(g.Lambda, g.L);
  if (!Gamma) {
    failed = "Lambda";
    return std::nullopt;
  }
  g.local_gain = std::move(*Gamma);

  const Matrix Qmu = model.Q() + mu * model.Q_risk();
  const Matrix KUK = g.K.transpose() * g.Upsilon * g.K;
  out.Z = linalg::symmetrize(At * next.Z * A + Qmu - KUK);
  out.X = linalg::symmetrize(At * next.Theta * A + Qmu - g.L.transpose() * g.local_gain);
  out.S = linalg::symmetrize(At * next.S * A - mu * model.Q_risk() + KUK -
                             g.Nmat.transpose() * *MinvN);
  const double p = model.p();
  out.Theta = linalg::symmetrize((1.0 - p) * out.Z + p * out.X);
  return g;
}

namespace {

RiccatiSolution run_finite(const ValidatedModel& model, double mu, int horizon,
                           bool throw_on_failure) {
  if (horizon < 0) {
    throw Error(ErrorKind::kInvalidArgument, "horizon",
                "horizon must be nonnegative");
  }
  if (!std::isfinite(mu) || mu < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "mu",
                "multiplier must be finite and nonnegative");
  }
  const auto len = static_cast<std::size_t>(horizon) + 2;
  RiccatiSolution sol;
  sol.mu = mu;
  sol.horizon = horizon;
  sol.Z.resize(len);
  sol.X.resize(len);
  sol.S.resize(len);
  sol.Theta.resize(len);
  sol.gains.resize(len - 1);

  RiccatiState state = terminal_state(model, mu);
  sol.Z[len - 1] = state.Z;
  sol.X[len - 1] = state.X;
  sol.S[len - 1] = state.S;
  sol.Theta[len - 1] = state.Theta;

  for (int k = horizon; k >= 0; --k) {
    RiccatiState cur;
    std::string failed;
    auto g = riccati_step(model, mu, state, cur, failed);
    if (!g) {
      if (throw_on_failure) throw NotSolvableError(k, failed, mu);
      sol.solvable = false;
      sol.failed_step = k;
      sol.failed_matrix = failed;
      return sol;
    }
    const auto idx = static_cast<std::size_t>(k);
    sol.gains[idx] = std::move(*g);
    sol.Z[idx] = cur.Z;
    sol.X[idx] = cur.X;
    sol.S[idx] = cur.S;
    sol.Theta[idx] = cur.Theta;
    state = std::move(cur);
  }
  return sol;
}

double state_change(const RiccatiState& a, const RiccatiState& b) {
  return std::max({linalg::max_abs(a.Z - b.Z), linalg::max_abs(a.X - b.X),
                   linalg::max_abs(a.S - b.S)});
}

double state_scale(const RiccatiState& s) {
  return std::max({linalg::max_abs(s.Z), linalg::max_abs(s.X), linalg::max_abs(s.S)});
}

bool finite_state(const RiccatiState& s) {
  return s.Z.allFinite() && s.X.allFinite() && s.S.allFinite();
}

}  // namespace

RiccatiSolution solve_finite(const ValidatedModel& model, double mu, int horizon) {
  return run_finite(model, mu, horizon, true);
}

RiccatiSolution try_solve_finite(const ValidatedModel& model, double mu,
                                 int horizon) {
  return run_finite(model, mu, horizon, false);
}

StationarySolution solve_stationary(const ValidatedModel& model, double mu,
                                    const StationaryOptions& options) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "mu",
                "multiplier must be finite and nonnegative");
  }
  StationarySolution out;
  out.mu = mu;
  RiccatiState state = terminal_state(model, mu);
  bool converged = false;
  int it = 0;
  while (it < options.max_iter) {
    ++it;
    RiccatiState next;
    std::string failed;
    if (!riccati_step(model, mu, state, next, failed)) {
      throw NotSolvableError(it, failed, mu);
    }
    if (!finite_state(next) || state_scale(next) > options.divergence_bound) {
      throw Error(ErrorKind::kDiverged, "riccati",
                  "stationary recursion diverged after " + std::to_string(it) +
                      " iterations");
    }
    const double delta = state_change(next, state);
    state = std::move(next);
    if (delta < options.tol * (1.0 + state_scale(state))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorKind::kDiverged, "riccati",
                "stationary recursion did not converge within " +
                    std::to_string(options.max_iter) + " iterations");
  }
  out.converged = true;
  out.iterations = it;

  RiccatiState image;
  std::string failed;
  auto g = riccati_step(model, mu, state, image, failed);
  if (!g) throw NotSolvableError(it, failed, mu);
  out.gains = std::move(*g);
  out.residual_Z = linalg::max_abs(image.Z - state.Z);
  out.residual_X = linalg::max_abs(image.X - state.X);
  out.residual_S = linalg::max_abs(image.S - state.S);

  out.Z = std::move(state.Z);
  out.X = std::move(state.X);
  out.S = std::move(state.S);
  out.Theta = std::move(state.Theta);

  out.Z_pd = linalg::is_pd(out.Z);
  out.ZS_pd = linalg::is_pd(out.Z + out.S);
  out.Theta_pd = linalg::is_pd(out.Theta);
  out.remote = remote_covariance_assessment(model, out.gains, options.tol,
                                            options.max_iter);
  out.ms_bounded = out.Z_pd && out.ZS_pd && out.Theta_pd && out.remote.converges;
  return out;
}

BoundednessVerdict boundedness_verdict(const ValidatedModel& model, double mu,
                                       const StationaryOptions& options) {
  BoundednessVerdict v;
  try {
    const StationarySolution s = solve_stationary(model, mu, options);
    v.ms_bounded = s.ms_bounded;
    v.spectral_value = s.remote.spectral_value;
    if (!s.ms_bounded) {
      v.reason = !s.remote.converges ? "remote error covariance does not converge"
                                     : "stationary matrices not positive definite";
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDiverged && e.kind() != ErrorKind::kNotSolvable) throw;
    v.diverged = e.kind() == ErrorKind::kDiverged;
    v.reason = e.what();
  }
  return v;
}

}  // namespace risklq
