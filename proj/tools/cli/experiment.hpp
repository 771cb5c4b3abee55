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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "risklq/dual.hpp"
#include "risklq/serialize.hpp"
#include "risklq/simulate.hpp"

namespace risklq::cli {

enum class Command { kSolve, kStationary, kBisect, kSimulate, kExample1, kExample2 };

std::string_view to_string(Command c);

/// Values given on the command line. Unset fields fall back to the model
/// file (keys "horizon", "mu", "epsilon", "samples", "seed", "risk_eval",
/// "noise") and then to per-command defaults.
struct ExperimentConfig {
  Command command = Command::kSolve;
  std::optional<std::filesystem::path> model_path;
  std::optional<int> horizon;
  std::optional<double> mu;
  std::optional<double> epsilon;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<RiskEval> risk_eval;
  std::filesystem::path out_dir = "risklq-out";
  int threads = 0;
};

/// Fully resolved settings, embedded in every artifact.
struct ResolvedConfig {
  Command command = Command::kSolve;
  std::optional<std::filesystem::path> model_path;
  SystemModel model;
  ValidationOptions validation;
  int horizon = 0;
  double mu = 0.0;
  double epsilon = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  RiskEval risk_eval = RiskEval::kAnalytic;
  NoiseKind noise_kind = NoiseKind::kGaussian;
  double noise_dof = 5.0;
  std::filesystem::path out_dir;
  int threads = 0;

  Json to_json() const;
};

ResolvedConfig resolve(const ExperimentConfig& config);

struct RunResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
  Json report;
  std::optional<Json> error;
};

/// Runs one command. Outputs are written to a staging directory and moved
/// into `out_dir` only when the command completes; on error the staging
/// directory is removed and `error` holds a machine-readable record.
/// exit_code is 0 iff every certificate of the command passed, 1 when a
/// certificate failed, 2 on error.
RunResult run(const ExperimentConfig& config);

/// Parses argv with CLI11. Throws CLI::ParseError subclasses on bad input.
ExperimentConfig parse_command_line(int argc, char** argv);

}  // namespace risklq::cli
