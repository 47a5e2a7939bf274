/*
 * Copyright 2026 The rosas Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ROSAS_ERROR_H_
#define ROSAS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rosas {

enum class ErrorCode {
  kContractViolation,
  kInvalidParameter,
  kInvalidArchitecture,
  kInsufficientBatch,
  kTrainingDiverged,
  kUnusableDataset,
  kLoadError,
  kUndefinedMetric,
  kCorruptArtifact,
  kVersionMismatch,
  kIo,
};

// Stable identifier used in machine-readable error records.
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(ErrorCode::kContractViolation, message);
}

}  // namespace rosas

#endif  // ROSAS_ERROR_H_
