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

#include "rosas/error.h"

namespace rosas {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kContractViolation:
      return "contract_violation";
    case ErrorCode::kInvalidParameter:
      return "invalid_parameter";
    case ErrorCode::kInvalidArchitecture:
      return "invalid_architecture";
    case ErrorCode::kInsufficientBatch:
      return "insufficient_batch";
    case ErrorCode::kTrainingDiverged:
      return "training_diverged";
    case ErrorCode::kUnusableDataset:
      return "unusable_dataset";
    case ErrorCode::kLoadError:
      return "load_error";
    case ErrorCode::kUndefinedMetric:
      return "undefined_metric";
    case ErrorCode::kCorruptArtifact:
      return "corrupt_artifact";
    case ErrorCode::kVersionMismatch:
      return "version_mismatch";
    case ErrorCode::kIo:
      return "io_error";
  }
  return "unknown";
}

}  // namespace rosas
