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

#include <filesystem>
#include <string>
#include <vector>

#include "cli/experiment.hpp"

namespace risklq::cli {

/// Collects artifacts in a directory. Every file gets the resolved config
/// and seed embedded.
class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, const ResolvedConfig& config);

  void json(const std::string& name, Json body);
  void csv(const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows,
           const std::vector<std::string>& legend = {});

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  Json config_;
  std::uint64_t seed_;
  std::vector<std::string> names_;
};

struct CommandOutcome {
  bool certificates_passed = true;
  Json report;
};

CommandOutcome run_solve(const ResolvedConfig& cfg, ArtifactWriter& out);
CommandOutcome run_stationary(const ResolvedConfig& cfg, ArtifactWriter& out);
CommandOutcome run_bisect(const ResolvedConfig& cfg, ArtifactWriter& out);
CommandOutcome run_simulate(const ResolvedConfig& cfg, ArtifactWriter& out);
CommandOutcome run_example1(const ResolvedConfig& cfg, ArtifactWriter& out);
CommandOutcome run_example2(const ResolvedConfig& cfg, ArtifactWriter& out);

}  // namespace risklq::cli
