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

#include <stdexcept>
#include <string>
#include <string_view>

namespace risklq {

/// Machine-readable category of a failure. Stable names are used in the CLI
/// error record, so do not reorder without updating `to_string`.
enum class ErrorKind {
  kDimensionMismatch,
  kNotSymmetric,
  kNotPSD,
  kNotPD,
  kProbabilityOutOfRange,
  kInvalidArgument,
  kSingularInnovation,
  kNotSolvable,
  kDiverged,
  kHorizonMismatch,
  kInfeasibleWithinCap,
  kMonotonicityViolation,
  kCertificateFailed,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every library error. `subject` names the offending
/// matrix, step or certificate item when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string subject, const std::string& message)
      : std::runtime_error(message), kind_(kind), subject_(std::move(subject)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorKind kind_;
  std::string subject_;
};

/// Raised when a gain matrix fails its positive-definiteness requirement
/// during the backward recursion. The finite-horizon problem has no unique
/// solution at this multiplier.
class NotSolvableError : public Error {
 public:
  NotSolvableError(int step, std::string which, double mu)
      : Error(ErrorKind::kNotSolvable, which,
              "Riccati recursion not solvable at step " + std::to_string(step) +
                  ": " + which + " is not positive definite (mu=" +
                  std::to_string(mu) + ")"),
        step_(step),
        mu_(mu) {}

  int step() const noexcept { return step_; }
  double mu() const noexcept { return mu_; }

 private:
  int step_;
  double mu_;
};

}  // namespace risklq
