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
#include "risklq/serialize.hpp"

#include <cstdio>
#include <fstream>

#include "risklq/error.hpp"

namespace risklq {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, std::string_view name) {
  const std::string key(name);
  if (j.is_number()) return Matrix::Constant(1, 1, j.get<double>());
  if (!j.is_array()) {
    throw Error(ErrorKind::kConfig, key, key + " must be a nested array of numbers");
  }
  if (j.empty()) return Matrix(0, 0);
  const auto rows = static_cast<Eigen::Index>(j.size());
  const bool nested = j.front().is_array();
  if (!nested) {
    // a flat array is a column
    Matrix m(rows, 1);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (!j[static_cast<std::size_t>(i)].is_number()) {
        throw Error(ErrorKind::kConfig, key, key + " has a non-numeric entry");
      }
      m(i, 0) = j[static_cast<std::size_t>(i)].get<double>();
    }
    return m;
  }
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::kConfig, key, key + " has ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw Error(ErrorKind::kConfig, key, key + " has a non-numeric entry");
      }
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const Json& j, std::string_view name) {
  const Matrix m = matrix_from_json(j, name);
  if (m.cols() > 1 && m.rows() == 1) return m.row(0).transpose();
  if (m.cols() > 1) {
    throw Error(ErrorKind::kConfig, std::string(name),
                std::string(name) + " must be a vector");
  }
  return m.size() == 0 ? Vector(0) : Vector(m.col(0));
}

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorKind::kConfig, key, std::string("missing required field '") + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) {
    throw Error(ErrorKind::kConfig, key, std::string(key) + " must be a number");
  }
  return v.get<double>();
}

}  // namespace

ModelDocument model_from_json(const Json& j) {
  if (!j.is_object()) {
    throw Error(ErrorKind::kConfig, "model", "model document must be a JSON object");
  }
  ModelDocument doc;
  SystemModel& m = doc.model;
  m.A = matrix_from_json(require(j, "A"), "A");
  m.B_local = j.contains("B_local") ? matrix_from_json(j["B_local"], "B_local") : Matrix();
  m.B_remote = j.contains("B_remote") ? matrix_from_json(j["B_remote"], "B_remote") : Matrix();
  m.C = matrix_from_json(require(j, "C"), "C");
  m.Q_w = matrix_from_json(require(j, "Q_w"), "Q_w");
  m.Q_v = matrix_from_json(require(j, "Q_v"), "Q_v");
  m.Q = matrix_from_json(require(j, "Q"), "Q");
  if (j.contains("Q_risk") && !j["Q_risk"].is_null()) {
    m.Q_risk = matrix_from_json(j["Q_risk"], "Q_risk");
  }
  m.R_local = j.contains("R_local") ? matrix_from_json(j["R_local"], "R_local") : Matrix();
  m.R_remote = j.contains("R_remote") ? matrix_from_json(j["R_remote"], "R_remote") : Matrix();
  m.G = matrix_from_json(require(j, "G"), "G");
  m.p = number(j, "p");
  m.x0_mean = vector_from_json(require(j, "x0_mean"), "x0_mean");
  m.Sigma_init = matrix_from_json(require(j, "Sigma_init"), "Sigma_init");
  m.epsilon = j.contains("epsilon") ? number(j, "epsilon") : 0.0;
  if (j.contains("allow_singular_measurement_noise")) {
    doc.options.allow_singular_measurement_noise =
        j["allow_singular_measurement_noise"].get<bool>();
  }
  doc.source = j;
  return doc;
}

ModelDocument load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, path.string(), "cannot open model file " + path.string());
  }
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kConfig, path.string(),
                "model file " + path.string() + " is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

Json model_to_json(const SystemModel& m, const ValidationOptions& options) {
  Json j;
  j["A"] = matrix_to_json(m.A);
  j["B_local"] = matrix_to_json(m.B_local);
  j["B_remote"] = matrix_to_json(m.B_remote);
  j["C"] = matrix_to_json(m.C);
  j["Q_w"] = matrix_to_json(m.Q_w);
  j["Q_v"] = matrix_to_json(m.Q_v);
  j["Q"] = matrix_to_json(m.Q);
  if (m.Q_risk) j["Q_risk"] = matrix_to_json(*m.Q_risk);
  j["R_local"] = matrix_to_json(m.R_local);
  j["R_remote"] = matrix_to_json(m.R_remote);
  j["G"] = matrix_to_json(m.G);
  j["p"] = m.p;
  j["x0_mean"] = vector_to_json(m.x0_mean);
  j["Sigma_init"] = matrix_to_json(m.Sigma_init);
  j["epsilon"] = m.epsilon;
  if (options.allow_singular_measurement_noise) {
    j["allow_singular_measurement_noise"] = true;
  }
  return j;
}

Json to_json(const GainSet& g) {
  return Json{{"Upsilon", matrix_to_json(g.Upsilon)}, {"K", matrix_to_json(g.K)},
              {"Kbar", matrix_to_json(g.Kbar)},       {"M", matrix_to_json(g.M)},
              {"N", matrix_to_json(g.Nmat)},          {"Lambda", matrix_to_json(g.Lambda)},
              {"L", matrix_to_json(g.L)},             {"local_gain", matrix_to_json(g.local_gain)}};
}

namespace {

Json matrix_list(const std::vector<Matrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

}  // namespace

Json to_json(const RiccatiSolution& s) {
  Json j;
  j["mu"] = s.mu;
  j["horizon"] = s.horizon;
  j["solvable"] = s.solvable;
  if (!s.solvable) {
    j["failed_step"] = s.failed_step;
    j["failed_matrix"] = s.failed_matrix;
  }
  j["Z"] = matrix_list(s.Z);
  j["X"] = matrix_list(s.X);
  j["S"] = matrix_list(s.S);
  j["Theta"] = matrix_list(s.Theta);
  Json gains = Json::array();
  for (const auto& g : s.gains) gains.push_back(to_json(g));
  j["gains"] = std::move(gains);
  return j;
}

Json to_json(const RemoteCovarianceAssessment& a) {
  Json j;
  j["converges"] = a.converges;
  j["spectral_value"] = a.spectral_value;
  j["Sigma_L_limit"] = matrix_to_json(a.Sigma_L_limit);
  j["Sigma_R_limit"] = a.Sigma_R_limit ? matrix_to_json(*a.Sigma_R_limit) : Json(nullptr);
  if (a.Sigma_R_limit) j["Sigma_R_trace"] = a.Sigma_R_limit->trace();
  j["iterations"] = a.iterations;
  return j;
}

Json to_json(const StationarySolution& s) {
  Json j;
  j["mu"] = s.mu;
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  j["ms_bounded"] = s.ms_bounded;
  j["spectral_value"] = s.remote.spectral_value;
  j["positivity"] = Json{{"Z", s.Z_pd}, {"Z_plus_S", s.ZS_pd}, {"Theta", s.Theta_pd}};
  j["residuals"] = Json{{"Z", s.residual_Z}, {"X", s.residual_X}, {"S", s.residual_S}};
  j["Z"] = matrix_to_json(s.Z);
  j["X"] = matrix_to_json(s.X);
  j["S"] = matrix_to_json(s.S);
  j["Theta"] = matrix_to_json(s.Theta);
  j["gains"] = to_json(s.gains);
  j["remote_covariance"] = to_json(s.remote);
  return j;
}

Json to_json(const CostBreakdown& c) {
  return Json{{"mu", c.mu},
              {"epsilon", c.epsilon},
              {"initial_term", c.initial_term},
              {"trace_terms", c.trace_terms},
              {"total", c.total},
              {"dual_value", c.dual_value}};
}

Json to_json(const RiskRecursion& r) {
  return Json{{"J_R_analytic", r.J_R_analytic}, {"q", r.q}, {"O_0", matrix_to_json(r.O.front())},
              {"P_0", matrix_to_json(r.P.front())}, {"W_0", matrix_to_json(r.W.front())}};
}

Json to_json(const PolicyMoments& m) {
  return Json{{"J", m.J}, {"J_R", m.J_R}, {"weighted_variance", m.weighted_variance}};
}

Json to_json(const McEstimate& e) {
  return Json{{"samples", e.samples},
              {"seed", e.seed},
              {"mean_mode", e.mean_mode == MeanMode::kAnalytic ? "analytic" : "ensemble"},
              {"J_hat", e.J_hat},
              {"stderr_J", e.stderr_J},
              {"J_R_hat", e.J_R_hat},
              {"stderr_JR", e.stderr_JR}};
}

Json to_json(const RiskCrossCheck& c) {
  return Json{{"analytic", c.analytic},
              {"monte_carlo", c.monte_carlo},
              {"monte_carlo_stderr", c.monte_carlo_stderr},
              {"relative_discrepancy", c.relative_discrepancy},
              {"analytic_flagged", c.analytic_flagged},
              {"authoritative", c.authoritative}};
}

Json to_json(const DualResult& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["horizon"] = r.horizon;
  j["risk_eval"] = std::string(to_string(r.risk_eval));
  j["mu_star"] = r.mu_star;
  j["J_R_at_star"] = r.J_R_at_star;
  j["J_R_stderr"] = r.J_R_stderr;
  j["J_R_analytic_at_star"] = r.J_R_analytic_at_star;
  j["J_at_star"] = r.J_at_star;
  j["Jbar_at_star"] = r.Jbar_at_star;
  j["dual_value"] = r.dual_value;
  j["slackness"] = r.slackness;
  j["feasible"] = r.feasible;
  j["evaluations"] = r.evaluations;
  if (r.cross_check) j["risk_cross_check"] = to_json(*r.cross_check);
  Json bracket = Json::array();
  for (const auto& b : r.bracket_history) {
    bracket.push_back(Json{{"mu_low", b.mu_low}, {"mu_high", b.mu_high},
                           {"mu_mid", b.mu_mid}, {"J_R_mid", b.J_R_mid}});
  }
  j["bracket_history"] = std::move(bracket);
  Json trail = Json::array();
  for (const auto& s : r.trail) {
    trail.push_back(Json{{"mu", s.mu}, {"J_R", s.J_R}, {"stderr_JR", s.stderr_JR},
                         {"feasible", s.feasible}});
  }
  j["trail"] = std::move(trail);
  return j;
}

Json to_json(const OptimalityCertificate& c) {
  return Json{{"passed", c.passed()},
              {"inner_solved", c.inner_solved},
              {"primal_feasible", c.primal_feasible},
              {"feasibility_margin", c.feasibility_margin},
              {"slackness_residual", c.slackness_residual},
              {"slackness_bound", c.slackness_bound},
              {"slackness_holds", c.slackness_holds},
              {"dual_value", c.dual_value},
              {"primal_value", c.primal_value},
              {"duality_gap", c.duality_gap},
              {"zero_gap", c.zero_gap}};
}

Json to_json(const EnsembleStats& s) {
  return Json{{"samples", s.samples},
              {"master_seed", s.master_seed},
              {"horizon", s.horizon},
              {"degenerate", s.degenerate},
              {"failure_rate", s.failure_rate},
              {"cost_mean", s.cost_mean},
              {"cost_stderr", s.cost_stderr},
              {"risk_mean", s.risk_mean},
              {"risk_stderr", s.risk_stderr},
              {"risk_ensemble", s.risk_ensemble}};
}

Json to_json(const BoundednessVerdict& v) {
  return Json{{"ms_bounded", v.ms_bounded},
              {"diverged", v.diverged},
              {"spectral_value", v.spectral_value},
              {"reason", v.reason}};
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, path.string(), "cannot write " + path.string());
  for (const auto& c : comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, path.string(), "failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, path.string(), "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, path.string(), "failed writing " + path.string());
}

}  // namespace risklq
