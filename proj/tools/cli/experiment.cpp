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
#include "cli/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "risklq/error.hpp"
#include "risklq/fixtures.hpp"

namespace risklq::cli {

std::string_view to_string(Command c) {
  switch (c) {
    case Command::kSolve:
      return "solve";
    case Command::kStationary:
      return "stationary";
    case Command::kBisect:
      return "bisect";
    case Command::kSimulate:
      return "simulate";
    case Command::kExample1:
      return "example1";
    case Command::kExample2:
      return "example2";
  }
  return "unknown";
}

Json ResolvedConfig::to_json() const {
  Json j;
  j["command"] = std::string(cli::to_string(command));
  j["model_path"] = model_path ? Json(model_path->string()) : Json(nullptr);
  j["horizon"] = horizon;
  j["mu"] = mu;
  j["epsilon"] = epsilon;
  j["samples"] = samples;
  j["seed"] = seed;
  j["risk_eval"] = std::string(risklq::to_string(risk_eval));
  j["noise"] = Json{{"kind", std::string(risklq::to_string(noise_kind))}, {"dof", noise_dof}};
  j["model"] = model_to_json(model, validation);
  return j;
}

namespace {

template <class T>
std::optional<T> file_value(const Json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  try {
    return doc[key].get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorKind::kConfig, key, std::string("config field '") + key +
                                             "' has the wrong type");
  }
}

void check_ranges(const ResolvedConfig& c) {
  if (c.horizon < 0) {
    throw Error(ErrorKind::kConfig, "horizon", "horizon must be nonnegative");
  }
  if (!std::isfinite(c.mu) || c.mu < 0.0) {
    throw Error(ErrorKind::kConfig, "mu", "mu must be finite and nonnegative");
  }
  if (!std::isfinite(c.epsilon) || c.epsilon < 0.0) {
    throw Error(ErrorKind::kConfig, "epsilon", "epsilon must be finite and nonnegative");
  }
  if (c.samples < 1) {
    throw Error(ErrorKind::kConfig, "samples", "samples must be at least 1");
  }
  if (c.noise_kind == NoiseKind::kStudentT && !(c.noise_dof > 2.0)) {
    throw Error(ErrorKind::kConfig, "noise.dof", "student-t noise needs dof > 2");
  }
}

}  // namespace

ResolvedConfig resolve(const ExperimentConfig& config) {
  ResolvedConfig r;
  r.command = config.command;
  r.out_dir = config.out_dir;
  r.threads = config.threads;

  Json doc = Json::object();
  const bool builtin =
      config.command == Command::kExample1 || config.command == Command::kExample2;
  if (builtin) {
    r.model = config.command == Command::kExample1 ? fixtures::example1() : fixtures::example2();
  } else {
    if (!config.model_path) {
      throw Error(ErrorKind::kConfig, "model",
                  std::string(cli::to_string(config.command)) + " requires --model");
    }
    ModelDocument md = load_model_file(*config.model_path);
    r.model = std::move(md.model);
    r.validation = md.options;
    r.model_path = config.model_path;
    doc = std::move(md.source);
  }

  // per-command defaults
  int horizon = 50;
  double mu = 0.0;
  std::size_t samples = 1000;
  RiskEval risk_eval = RiskEval::kAnalytic;
  switch (config.command) {
    case Command::kBisect:
      samples = 100000;
      break;
    case Command::kExample1:
      horizon = fixtures::kExample1Horizon;
      mu = 10.0;
      break;
    case Command::kExample2:
      horizon = fixtures::kExample2Horizon;
      samples = 100000;
      risk_eval = RiskEval::kMonteCarlo;
      break;
    default:
      break;
  }

  r.horizon = config.horizon.value_or(file_value<int>(doc, "horizon").value_or(horizon));
  r.mu = config.mu.value_or(file_value<double>(doc, "mu").value_or(mu));
  r.epsilon = config.epsilon.value_or(r.model.epsilon);
  r.model.epsilon = r.epsilon;
  r.samples = config.samples.value_or(file_value<std::size_t>(doc, "samples").value_or(samples));
  r.seed = config.seed.value_or(file_value<std::uint64_t>(doc, "seed").value_or(0));
  if (config.risk_eval) {
    r.risk_eval = *config.risk_eval;
  } else if (auto s = file_value<std::string>(doc, "risk_eval")) {
    r.risk_eval = risk_eval_from_string(*s);
  } else {
    r.risk_eval = risk_eval;
  }
  if (doc.contains("noise") && doc["noise"].is_object()) {
    const Json& n = doc["noise"];
    if (n.contains("kind")) r.noise_kind = noise_kind_from_string(n["kind"].get<std::string>());
    if (n.contains("dof")) r.noise_dof = n["dof"].get<double>();
  }
  check_ranges(r);
  return r;
}

namespace {

std::filesystem::path make_staging(const std::filesystem::path& out_dir) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::create_directories(out_dir);
  for (;;) {
    std::ostringstream name;
    name << ".staging-" << ::getpid() << "-" << counter.fetch_add(1);
    const auto dir = out_dir / name.str();
    if (std::filesystem::create_directory(dir)) return dir;
  }
}

Json error_record(ErrorKind kind, const std::string& subject, const std::string& message,
                  Command command) {
  return Json{{"error", Json{{"kind", std::string(risklq::to_string(kind))},
                             {"subject", subject},
                             {"message", message},
                             {"command", std::string(cli::to_string(command))}}}};
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  std::filesystem::path staging;
  try {
    const ResolvedConfig cfg = resolve(config);
    staging = make_staging(cfg.out_dir);
    ArtifactWriter writer(staging, cfg);
    CommandOutcome outcome;
    switch (cfg.command) {
      case Command::kSolve:
        outcome = run_solve(cfg, writer);
        break;
      case Command::kStationary:
        outcome = run_stationary(cfg, writer);
        break;
      case Command::kBisect:
        outcome = run_bisect(cfg, writer);
        break;
      case Command::kSimulate:
        outcome = run_simulate(cfg, writer);
        break;
      case Command::kExample1:
        outcome = run_example1(cfg, writer);
        break;
      case Command::kExample2:
        outcome = run_example2(cfg, writer);
        break;
    }
    for (const auto& name : writer.names()) {
      const auto dest = cfg.out_dir / name;
      std::filesystem::rename(staging / name, dest);
      result.files.push_back(dest);
    }
    std::filesystem::remove_all(staging);
    result.report = std::move(outcome.report);
    result.exit_code = outcome.certificates_passed ? 0 : 1;
  } catch (const Error& e) {
    result.error = error_record(e.kind(), e.subject(), e.what(), config.command);
  } catch (const std::filesystem::filesystem_error& e) {
    result.error = error_record(ErrorKind::kIo, e.path1().string(), e.what(), config.command);
  } catch (const std::exception& e) {
    result.error = error_record(ErrorKind::kInvalidArgument, "", e.what(), config.command);
  }
  if (result.error) {
    if (!staging.empty()) {
      std::error_code ec;
      std::filesystem::remove_all(staging, ec);
    }
    result.files.clear();
    result.exit_code = 2;
  }
  return result;
}

ExperimentConfig parse_command_line(int argc, char** argv) {
  CLI::App app{"risklq: LQ control of a local/remote controller pair under a variance budget"};
  app.require_subcommand(1);
  ExperimentConfig cfg;

  std::string model;
  double mu = 0.0;
  double epsilon = 0.0;
  int horizon = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string risk_eval;
  std::string out;

  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::kSolve, "finite-horizon gains, optimal cost and risk"},
      {Command::kStationary, "stationary gains and mean-square boundedness"},
      {Command::kBisect, "bisection for the optimal multiplier"},
      {Command::kSimulate, "Monte Carlo ensemble of the closed loop"},
      {Command::kExample1, "built-in unstable plant: variance and covariance traces"},
      {Command::kExample2, "built-in plant: multiplier search with epsilon = 40"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(cmd)), help);
    sub->add_option("--model", model, "model JSON file");
    sub->add_option("--mu", mu, "Lagrange multiplier")->check(CLI::NonNegativeNumber);
    sub->add_option("--epsilon", epsilon, "risk budget")->check(CLI::NonNegativeNumber);
    sub->add_option("--horizon", horizon, "horizon N (steps 0..N)")->check(CLI::NonNegativeNumber);
    sub->add_option("--samples", samples, "Monte Carlo trajectories")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--risk-eval", risk_eval, "risk evaluation")
        ->check(CLI::IsMember({"analytic", "mc"}));
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all)");
    subs.emplace_back(cmd, sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage or the parse error
    throw;
  }

  for (const auto& [cmd, sub] : subs) {
    if (!sub->parsed()) continue;
    cfg.command = cmd;
    if (sub->count("--model")) cfg.model_path = model;
    if (sub->count("--mu")) cfg.mu = mu;
    if (sub->count("--epsilon")) cfg.epsilon = epsilon;
    if (sub->count("--horizon")) cfg.horizon = horizon;
    if (sub->count("--samples")) cfg.samples = samples;
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--out")) cfg.out_dir = out;
    if (sub->count("--risk-eval")) cfg.risk_eval = risk_eval_from_string(risk_eval);
  }
  return cfg;
}

}  // namespace risklq::cli
