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
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "risklq/dual.hpp"
#include "risklq/evaluation.hpp"
#include "risklq/model.hpp"
#include "risklq/riccati.hpp"
#include "risklq/simulate.hpp"

namespace risklq {

using Json = nlohmann::ordered_json;

/// Matrices are row-major nested arrays. An empty array is a 0x0 matrix.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, std::string_view name);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, std::string_view name);

/// Model fields plus the optional validation switch
/// "allow_singular_measurement_noise".
struct ModelDocument {
  SystemModel model;
  ValidationOptions options;
  Json source;  ///< the parsed document, including keys not used here
};

ModelDocument model_from_json(const Json& j);
ModelDocument load_model_file(const std::filesystem::path& path);
Json model_to_json(const SystemModel& model, const ValidationOptions& options = {});

Json to_json(const GainSet& g);
Json to_json(const RiccatiSolution& s);
Json to_json(const StationarySolution& s);
Json to_json(const CostBreakdown& c);
Json to_json(const RiskRecursion& r);
Json to_json(const PolicyMoments& m);
Json to_json(const McEstimate& e);
Json to_json(const RiskCrossCheck& c);
Json to_json(const DualResult& r);
Json to_json(const OptimalityCertificate& c);
Json to_json(const EnsembleStats& s);
Json to_json(const BoundednessVerdict& v);
Json to_json(const RemoteCovarianceAssessment& a);

/// Writes a CSV file. Each comment line is emitted first, prefixed "# ".
/// Numbers use 17 significant digits so reruns compare bytewise.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace risklq
