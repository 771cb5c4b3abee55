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
#include "risklq/dual.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "risklq/error.hpp"

namespace risklq {

std::string_view to_string(RiskEval mode) {
  return mode == RiskEval::kAnalytic ? "analytic" : "mc";
}

RiskEval risk_eval_from_string(std::string_view name) {
  if (name == "analytic") return RiskEval::kAnalytic;
  if (name == "mc" || name == "montecarlo") return RiskEval::kMonteCarlo;
  throw Error(ErrorKind::kConfig, "risk_eval",
              "risk evaluation must be 'analytic' or 'mc', got '" + std::string(name) + "'");
}

namespace {

struct Evaluation {
  RiskSample sample;
  double Jbar = 0.0;
  double J_R_analytic = 0.0;
  double J = 0.0;
  std::optional<McEstimate> mc;
};

class Evaluator {
 public:
  Evaluator(const ValidatedModel& model, int horizon, double epsilon,
            const DualOptions& options)
      : model_(model),
        horizon_(horizon),
        epsilon_(epsilon),
        options_(options),
        schedule_(covariance_schedule(model, horizon)) {}

  Evaluation operator()(double mu) {
    ++count_;
    const RiccatiSolution sol = solve_finite(model_, mu, horizon_);
    const CostBreakdown cost = optimal_cost(model_, sol, schedule_);
    const RiskRecursion risk = risk_value(model_, sol, schedule_);
    Evaluation e;
    e.Jbar = cost.total;
    e.J_R_analytic = risk.J_R_analytic;
    e.sample.mu = mu;
    if (options_.risk_eval == RiskEval::kAnalytic) {
      e.sample.J_R = risk.J_R_analytic;
      e.sample.feasible = e.sample.J_R <= epsilon_;
      e.J = cost.total - mu * risk.J_R_analytic;
    } else {
      e.mc = mc_evaluate(model_, PolicySchedule::from_solution(sol), options_.mc);
      e.sample.J_R = e.mc->J_R_hat;
      e.sample.stderr_JR = e.mc->stderr_JR;
      e.sample.feasible = e.mc->J_R_hat + options_.z * e.mc->stderr_JR <= epsilon_;
      e.J = e.mc->J_hat;
    }
    trail_.push_back(e.sample);
    return e;
  }

  int count() const { return count_; }
  std::vector<RiskSample>& trail() { return trail_; }

 private:
  const ValidatedModel& model_;
  int horizon_;
  double epsilon_;
  const DualOptions& options_;
  CovarianceSchedule schedule_;
  std::vector<RiskSample> trail_;
  int count_ = 0;
};

}  // namespace

void audit_monotonicity(const std::vector<RiskSample>& trail, RiskEval mode) {
  std::vector<RiskSample> sorted = trail;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RiskSample& a, const RiskSample& b) { return a.mu < b.mu; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const RiskSample& lo = sorted[i];
      const RiskSample& hi = sorted[j];
      if (hi.mu <= lo.mu) continue;
      double slack = 1e-9 * (1.0 + std::abs(lo.J_R));
      if (mode == RiskEval::kMonteCarlo) {
        slack += 3.0 * std::hypot(lo.stderr_JR, hi.stderr_JR);
      }
      if (hi.J_R > lo.J_R + slack) {
        std::ostringstream msg;
        msg << "risk increases with the multiplier: J_R(" << lo.mu << ")=" << lo.J_R
            << " < J_R(" << hi.mu << ")=" << hi.J_R;
        throw Error(ErrorKind::kMonotonicityViolation, "J_R", msg.str());
      }
    }
  }
}

DualResult bisect_multiplier(const ValidatedModel& model, int horizon, double epsilon,
                             const DualOptions& options) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "epsilon",
                "risk budget must be finite and nonnegative");
  }
  if (!(options.mu_max > 0.0) || !std::isfinite(options.mu_max)) {
    throw Error(ErrorKind::kInvalidArgument, "mu_max", "mu_max must be positive");
  }
  Evaluator eval(model, horizon, epsilon, options);
  DualResult r;
  r.epsilon = epsilon;
  r.horizon = horizon;
  r.risk_eval = options.risk_eval;

  Evaluation best = eval(0.0);
  if (!best.sample.feasible) {
    double lo = 0.0;
    double hi = options.mu_max;
    for (;;) {
      if (hi > options.mu_cap) {
        std::ostringstream msg;
        msg << "risk budget " << epsilon << " not met for any multiplier up to "
            << options.mu_cap;
        throw Error(ErrorKind::kInfeasibleWithinCap, "epsilon", msg.str());
      }
      Evaluation e = eval(hi);
      if (e.sample.feasible) {
        best = std::move(e);
        break;
      }
      lo = hi;
      hi *= 2.0;
    }
    for (;;) {
      const double tol = options.tol_mu.value_or(1e-3 * (1.0 + hi));
      if (hi - lo < tol) break;
      const double mid = 0.5 * (lo + hi);
      Evaluation e = eval(mid);
      const double J_R_mid = e.sample.J_R;
      if (e.sample.feasible) {
        hi = mid;
        best = std::move(e);
      } else {
        lo = mid;
      }
      r.bracket_history.push_back(BracketEntry{lo, hi, mid, J_R_mid});
    }
  }

  r.mu_star = best.sample.mu;
  r.J_R_at_star = best.sample.J_R;
  r.J_R_stderr = best.sample.stderr_JR;
  r.J_at_star = best.J;
  if (best.mc) r.J_stderr = best.mc->stderr_J;
  r.Jbar_at_star = best.Jbar;
  r.dual_value = best.Jbar - r.mu_star * epsilon;
  r.slackness = r.mu_star * (r.J_R_at_star - epsilon);
  r.feasible = best.sample.feasible;
  r.J_R_analytic_at_star = best.J_R_analytic;
  if (best.mc) r.cross_check = cross_check_risk(best.J_R_analytic, *best.mc);
  r.evaluations = eval.count();
  r.trail = std::move(eval.trail());
  if (options.audit_monotonicity) audit_monotonicity(r.trail, options.risk_eval);
  return r;
}

OptimalityCertificate duality_report(const ValidatedModel& model, const DualResult& result,
                                     const CertificateOptions& options) {
  OptimalityCertificate c;
  const RiccatiSolution sol = try_solve_finite(model, result.mu_star, result.horizon);
  c.inner_solved = sol.solvable;
  if (!c.inner_solved) {
    throw Error(ErrorKind::kCertificateFailed, "inner_minimization",
                "inner minimization is not uniquely solvable at mu*=" +
                    std::to_string(result.mu_star));
  }
  const double eps = result.epsilon;
  c.feasibility_margin = eps - result.J_R_at_star;
  c.primal_feasible = result.J_R_at_star <= eps + options.feasibility_tol * (1.0 + eps);
  if (!c.primal_feasible) {
    throw Error(ErrorKind::kCertificateFailed, "feasibility",
                "risk " + std::to_string(result.J_R_at_star) + " exceeds budget " +
                    std::to_string(eps));
  }
  c.slackness_residual = result.mu_star * (result.J_R_at_star - eps);
  c.slackness_bound = options.slack_tol * (1.0 + result.mu_star * eps);
  c.slackness_holds = std::abs(c.slackness_residual) <= c.slackness_bound;

  const CovarianceSchedule schedule = covariance_schedule(model, result.horizon);
  const CostBreakdown cost = optimal_cost(model, sol, schedule);
  c.dual_value = cost.total - result.mu_star * eps;
  c.primal_value = result.J_at_star;
  c.duality_gap = c.dual_value - c.primal_value;
  const double scale = 1.0 + std::abs(c.primal_value);
  if (result.risk_eval == RiskEval::kAnalytic) {
    c.zero_gap = std::abs(c.duality_gap) <= options.slack_tol * scale;
  } else {
    // The Monte Carlo cost carries sampling error.
    c.zero_gap = std::abs(c.duality_gap) <= options.slack_tol * scale + 3.0 * result.J_stderr;
  }
  return c;
}

}  // namespace risklq
