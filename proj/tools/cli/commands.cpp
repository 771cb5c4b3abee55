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
#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "risklq/error.hpp"
#include "risklq/fixtures.hpp"

namespace risklq::cli {

ArtifactWriter::ArtifactWriter(std::filesystem::path dir, const ResolvedConfig& config)
    : dir_(std::move(dir)), config_(config.to_json()), seed_(config.seed) {}

void ArtifactWriter::json(const std::string& name, Json body) {
  Json doc;
  doc["config"] = config_;
  doc["seed"] = seed_;
  for (auto& [k, v] : body.items()) doc[k] = v;
  write_json(dir_ / name, doc);
  names_.push_back(name);
}

void ArtifactWriter::csv(const std::string& name, const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows,
                         const std::vector<std::string>& legend) {
  std::vector<std::string> comments;
  comments.push_back("config: " + config_.dump());
  comments.push_back("seed: " + std::to_string(seed_));
  comments.insert(comments.end(), legend.begin(), legend.end());
  write_csv(dir_ / name, comments, header, rows);
  names_.push_back(name);
}

namespace {

constexpr double kZ95 = 1.96;

std::vector<std::vector<double>> variance_rows(const EnsembleStats& st,
                                               const std::vector<double>& analytic) {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < st.weighted_variance.size(); ++k) {
    const double v = st.weighted_variance[k];
    const double h = kZ95 * st.weighted_variance_stderr[k];
    rows.push_back({static_cast<double>(k), v, v - h, v + h, analytic[k]});
  }
  return rows;
}

const std::vector<std::string> kVarianceHeader = {"k", "weighted_variance", "ci_low",
                                                  "ci_high", "analytic"};

void append_matrix(std::vector<double>& row, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
  }
}

void append_matrix_header(std::vector<std::string>& header, const std::string& name,
                          const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      header.push_back(name + "_" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  }
}

bool symmetric_sequence(const std::vector<Matrix>& ms) {
  return std::all_of(ms.begin(), ms.end(), [](const Matrix& m) {
    return linalg::max_abs(m - m.transpose()) <= 1e-10 * (1.0 + linalg::max_abs(m));
  });
}

Json interval(double mean, double stderr_) {
  return Json{{"mean", mean},
              {"stderr", stderr_},
              {"ci_low", mean - kZ95 * stderr_},
              {"ci_high", mean + kZ95 * stderr_}};
}

double average_trace(const std::vector<Matrix>& ms, std::size_t from) {
  double sum = 0.0;
  for (std::size_t k = from; k < ms.size(); ++k) sum += ms[k].trace();
  return sum / static_cast<double>(ms.size() - from);
}

}  // namespace

CommandOutcome run_solve(const ResolvedConfig& cfg, ArtifactWriter& out) {
  const ValidatedModel model = validate(cfg.model, cfg.validation);
  const RiccatiSolution sol = solve_finite(model, cfg.mu, cfg.horizon);
  const CovarianceSchedule sched = covariance_schedule(model, cfg.horizon);
  const CostBreakdown cost = optimal_cost(model, sol, sched);
  const RiskRecursion risk = risk_value(model, sol, sched);
  const PolicySchedule policy = PolicySchedule::from_solution(sol);
  const PolicyMoments moments = policy_moments(model, policy, sched);

  CommandOutcome o;
  const bool symmetric = symmetric_sequence(sol.Z) && symmetric_sequence(sol.X) &&
                         symmetric_sequence(sol.S) && symmetric_sequence(sol.Theta);
  const double rel = std::abs(risk.J_R_analytic - moments.J_R) /
                     std::max(1e-300, std::abs(moments.J_R));
  const bool risk_consistent = rel <= 1e-8 || moments.J_R == risk.J_R_analytic;
  o.certificates_passed = sol.solvable && symmetric && risk_consistent;
  o.report["certificates"] = Json{{"solvable", sol.solvable},
                                  {"symmetric_iterates", symmetric},
                                  {"risk_routes_agree", risk_consistent},
                                  {"passed", o.certificates_passed}};
  o.report["cost"] = to_json(cost);
  o.report["risk"] = to_json(risk);
  o.report["policy_moments"] = to_json(moments);
  o.report["riccati"] = to_json(sol);
  out.json("solution.json", o.report);

  std::vector<std::string> header = {"k"};
  append_matrix_header(header, "K", sol.gains[0].K);
  append_matrix_header(header, "Kbar", sol.gains[0].Kbar);
  append_matrix_header(header, "local_gain", sol.gains[0].local_gain);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < sol.gains.size(); ++k) {
    std::vector<double> row = {static_cast<double>(k)};
    append_matrix(row, sol.gains[k].K);
    append_matrix(row, sol.gains[k].Kbar);
    append_matrix(row, sol.gains[k].local_gain);
    rows.push_back(std::move(row));
  }
  out.csv("gains.csv", header, rows, {"matrix entries are row-major, 1-based"});

  std::vector<std::vector<double>> vrows;
  for (std::size_t k = 0; k < moments.weighted_variance.size(); ++k) {
    const double v = moments.weighted_variance[k];
    vrows.push_back({static_cast<double>(k), v, v, v, v});
  }
  out.csv("variance_profile.csv", kVarianceHeader, vrows,
          {"analytic profile: ci columns equal the value"});
  return o;
}

CommandOutcome run_stationary(const ResolvedConfig& cfg, ArtifactWriter& out) {
  const ValidatedModel model = validate(cfg.model, cfg.validation);
  const StationarySolution s = solve_stationary(model, cfg.mu);
  const double scale = 1.0 + std::max({linalg::max_abs(s.Z), linalg::max_abs(s.X),
                                       linalg::max_abs(s.S)});
  const bool residuals_ok =
      std::max({s.residual_Z, s.residual_X, s.residual_S}) <= 1e-8 * scale;
  CommandOutcome o;
  o.certificates_passed = s.converged && residuals_ok;
  o.report["certificates"] = Json{{"converged", s.converged},
                                  {"fixed_point_residuals", residuals_ok},
                                  {"passed", o.certificates_passed}};
  o.report["model_flags"] = Json{{"detectable", model.detectable()},
                                 {"observable", model.observable()}};
  o.report["stationary"] = to_json(s);
  out.json("stationary.json", o.report);
  return o;
}

CommandOutcome run_bisect(const ResolvedConfig& cfg, ArtifactWriter& out) {
  const ValidatedModel model = validate(cfg.model, cfg.validation);
  DualOptions opts;
  opts.risk_eval = cfg.risk_eval;
  opts.mc.samples = cfg.samples;
  opts.mc.seed = cfg.seed;
  opts.mc.threads = cfg.threads;
  opts.mc.noise_kind = cfg.noise_kind;
  opts.mc.dof = cfg.noise_dof;
  const DualResult r = bisect_multiplier(model, cfg.horizon, cfg.epsilon, opts);
  const OptimalityCertificate cert = duality_report(model, r);

  CommandOutcome o;
  o.certificates_passed = cert.passed();
  o.report["dual"] = to_json(r);
  o.report["certificate"] = to_json(cert);
  out.json("dual.json", o.report);

  std::vector<std::vector<double>> rows;
  for (const auto& s : r.trail) {
    rows.push_back({s.mu, s.J_R, s.stderr_JR, s.feasible ? 1.0 : 0.0});
  }
  out.csv("mu_trail.csv", {"mu", "J_R", "stderr_JR", "feasible"}, rows,
          {"one row per risk evaluation, in evaluation order"});
  return o;
}

CommandOutcome run_simulate(const ResolvedConfig& cfg, ArtifactWriter& out) {
  const ValidatedModel model = validate(cfg.model, cfg.validation);
  const RiccatiSolution sol = solve_finite(model, cfg.mu, cfg.horizon);
  const PolicySchedule policy = PolicySchedule::from_solution(sol);
  const ClosedLoop loop(model, policy, model_noise(model, cfg.noise_kind, cfg.noise_dof));
  const EnsembleStats st = ensemble(loop, EnsembleOptions{cfg.samples, cfg.seed, cfg.threads});
  const PolicyMoments moments = policy_moments(model, policy, loop.schedule());

  CommandOutcome o;
  o.report["ensemble"] = to_json(st);
  o.report["analytic"] = to_json(moments);
  o.report["warnings"] = Json::array();
  if (st.degenerate) {
    o.report["warnings"].push_back("fewer than two samples: variances reported as zero");
  }
  out.json("ensemble.json", o.report);
  out.csv("variance_profile.csv", kVarianceHeader, variance_rows(st, moments.weighted_variance));

  std::vector<std::string> header = {"k"};
  for (Eigen::Index i = 0; i < model.n(); ++i) header.push_back("mean_x" + std::to_string(i + 1));
  for (const char* h : {"weighted_variance_ensemble", "local_error_trace", "remote_error_trace",
                        "second_moment"}) {
    header.push_back(h);
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < st.mean.size(); ++k) {
    std::vector<double> row = {static_cast<double>(k)};
    for (Eigen::Index i = 0; i < model.n(); ++i) row.push_back(st.mean[k](i));
    row.push_back(st.weighted_variance_ensemble[k]);
    row.push_back(st.local_error_cov[k].trace());
    row.push_back(st.remote_error_cov[k].trace());
    row.push_back(st.second_moment[k]);
    rows.push_back(std::move(row));
  }
  out.csv("ensemble_steps.csv", header, rows);
  return o;
}

CommandOutcome run_example1(const ResolvedConfig& cfg, ArtifactWriter& out) {
  const ValidatedModel model = validate(cfg.model, cfg.validation);
  const std::vector<double> mus = {0.0, cfg.mu};
  const EnsembleOptions eo{cfg.samples, cfg.seed, cfg.threads};

  CommandOutcome o;
  Json variance = Json::array();
  std::vector<double> cumulative_mean;
  std::vector<double> cumulative_se;
  for (double mu : mus) {
    const PolicySchedule policy = PolicySchedule::from_solution(solve_finite(model, mu, cfg.horizon));
    const ClosedLoop loop(model, policy, model_noise(model, cfg.noise_kind, cfg.noise_dof));
    const EnsembleStats st = ensemble(loop, eo);
    const PolicyMoments pm = policy_moments(model, policy, loop.schedule());
    cumulative_mean.push_back(st.risk_mean);
    cumulative_se.push_back(st.risk_stderr);
    variance.push_back(Json{{"mu", mu},
                            {"cumulative_weighted_variance", interval(st.risk_mean, st.risk_stderr)},
                            {"analytic", pm.J_R}});
    char name[64];
    std::snprintf(name, sizeof name, "example1_variance_mu%g.csv", mu);
    out.csv(name, kVarianceHeader, variance_rows(st, pm.weighted_variance),
            {"per-step weighted variance E(x-Ex)'Q(x-Ex), mu=" + std::to_string(mu)});
  }
  const bool variance_ordered =
      cumulative_mean[1] + kZ95 * cumulative_se[1] < cumulative_mean[0] - kZ95 * cumulative_se[0];

  // Remote error covariance traces for two channel qualities under the
  // unconstrained gains, finite horizon and stationary limit.
  const std::vector<double> ps = {0.2, 0.8};
  Json traces = Json::array();
  std::vector<std::vector<double>> columns;
  std::vector<double> limit;
  std::vector<double> mc_limit;
  for (double p : ps) {
    const ValidatedModel mp = with_failure_probability(model, p);
    const RiccatiSolution sol = solve_finite(mp, 0.0, cfg.horizon);
    const CovarianceSchedule sched = covariance_schedule(mp, cfg.horizon);
    const std::vector<Matrix> sigma_r = remote_error_covariance(mp, sched, sol.local_gains());
    const StationarySolution stat = solve_stationary(mp, 0.0);
    const PolicySchedule stat_policy = PolicySchedule::stationary(stat, cfg.horizon);
    const ClosedLoop loop(mp, stat_policy, model_noise(mp, cfg.noise_kind, cfg.noise_dof));
    const EnsembleStats st = ensemble(loop, eo);
    const std::size_t settle = st.remote_error_cov.size() / 2;
    const double mc = average_trace(st.remote_error_cov, settle);
    const double an = stat.remote.Sigma_R_limit ? stat.remote.Sigma_R_limit->trace()
                                                : std::numeric_limits<double>::infinity();
    limit.push_back(an);
    mc_limit.push_back(mc);
    std::vector<double> an_col;
    std::vector<double> mc_col;
    for (std::size_t k = 0; k < sigma_r.size(); ++k) {
      an_col.push_back(sigma_r[k].trace());
      mc_col.push_back(st.remote_error_cov[k].trace());
    }
    columns.push_back(std::move(an_col));
    columns.push_back(std::move(mc_col));
    traces.push_back(Json{{"p", p},
                          {"stationary_trace_analytic", an},
                          {"stationary_trace_monte_carlo", mc},
                          {"relative_discrepancy", std::abs(an - mc) / an},
                          {"spectral_value", stat.remote.spectral_value}});
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < columns[0].size(); ++k) {
    std::vector<double> row = {static_cast<double>(k)};
    for (const auto& c : columns) row.push_back(c[k]);
    rows.push_back(std::move(row));
  }
  out.csv("example1_covariance_traces.csv",
          {"k", "trace_p0.2_analytic", "trace_p0.2_mc", "trace_p0.8_analytic", "trace_p0.8_mc"},
          rows, {"trace of the remote error covariance, mu=0 gains"});

  const bool traces_ordered = limit[0] < limit[1] && mc_limit[0] < mc_limit[1];
  bool traces_agree = true;
  for (std::size_t i = 0; i < limit.size(); ++i) {
    traces_agree = traces_agree && std::abs(limit[i] - mc_limit[i]) <= 0.05 * limit[i];
  }
  o.certificates_passed = variance_ordered && traces_ordered && traces_agree;
  o.report["variance"] = std::move(variance);
  o.report["covariance_traces"] = std::move(traces);
  o.report["certificates"] = Json{{"constrained_variance_smaller", variance_ordered},
                                  {"trace_order_p02_below_p08", traces_ordered},
                                  {"trace_analytic_matches_mc", traces_agree},
                                  {"passed", o.certificates_passed}};
  out.json("example1.json", o.report);
  return o;
}

CommandOutcome run_example2(const ResolvedConfig& cfg, ArtifactWriter& out) {
  const ValidatedModel model = validate(cfg.model, cfg.validation);
  DualOptions opts;
  opts.risk_eval = cfg.risk_eval;
  opts.mc.samples = cfg.samples;
  opts.mc.seed = cfg.seed;
  opts.mc.threads = cfg.threads;
  opts.mc.noise_kind = cfg.noise_kind;
  opts.mc.dof = cfg.noise_dof;
  const DualResult r = bisect_multiplier(model, cfg.horizon, cfg.epsilon, opts);
  const OptimalityCertificate cert = duality_report(model, r);

  CommandOutcome o;
  o.certificates_passed = cert.passed();
  o.report["mu_star"] = r.mu_star;
  o.report["J_R"] = r.J_R_at_star;
  o.report["dual"] = to_json(r);
  o.report["certificate"] = to_json(cert);

  // analytic risk and cost over a multiplier grid
  const CovarianceSchedule sched = covariance_schedule(model, cfg.horizon);
  std::vector<std::vector<double>> curve;
  for (int i = 0; i <= 40; ++i) {
    const double mu = 0.5 * i;
    const RiccatiSolution sol = solve_finite(model, mu, cfg.horizon);
    const CostBreakdown cost = optimal_cost(model, sol, sched);
    const double jr = risk_value(model, sol, sched).J_R_analytic;
    curve.push_back({mu, jr, cost.total - mu * jr, cost.total, cost.dual_value});
  }
  out.json("example2.json", o.report);
  std::vector<std::vector<double>> trail;
  for (const auto& s : r.trail) trail.push_back({s.mu, s.J_R, s.stderr_JR, s.feasible ? 1.0 : 0.0});
  out.csv("example2_trail.csv", {"mu", "J_R", "stderr_JR", "feasible"}, trail);
  out.csv("example2_risk_curve.csv", {"mu", "J_R", "J", "Jbar", "dual_value"}, curve,
          {"analytic evaluation of the optimal policy at each multiplier"});
  return o;
}

}  // namespace risklq::cli
