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
#include <iostream>

#include "CLI11.hpp"
#include "cli/experiment.hpp"

int main(int argc, char** argv) {
  risklq::cli::ExperimentConfig config;
  try {
    config = risklq::cli::parse_command_line(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    const risklq::Json record{{"error", {{"kind", "ConfigError"}, {"message", e.what()}}}};
    std::cerr << record.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    const risklq::Json record{{"error", {{"kind", "ConfigError"}, {"message", e.what()}}}};
    std::cerr << record.dump() << '\n';
    return 2;
  }

  const risklq::cli::RunResult result = risklq::cli::run(config);
  if (result.error) {
    std::cerr << result.error->dump() << '\n';
    return result.exit_code;
  }
  for (const auto& f : result.files) std::cout << f.string() << '\n';
  return result.exit_code;
}
