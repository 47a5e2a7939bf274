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

// Versioned JSON model artifacts. Every double is written in its shortest
// round-trip decimal form, so save -> load reproduces scores bit for bit.
//
//   {
//     "format": "rosas-model",
//     "version": 1,
//     "architecture": {"input_dim", "rep_dim", "rep_hidden", "score_hidden",
//                      "leaky_slope"},
//     "layers": {"rep_hidden" | "rep_out" | "score_hidden" | "score_out":
//                {"rows", "cols", "weights": [row-major], "bias": [...]}},
//     "normalization": {"min": [...], "max": [...]},
//     "features": [...],
//     "config": {...},
//     "seed": <uint64>
//   }

#ifndef ROSAS_MODEL_IO_H_
#define ROSAS_MODEL_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rosas/data.h"
#include "rosas/scorer.h"

namespace rosas {

inline constexpr std::string_view kModelFormat = "rosas-model";
inline constexpr int kModelVersion = 1;

struct ModelArtifact {
  ScorerParams params;
  NormState norm;
  std::vector<std::string> feature_names;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
};

std::string SerializeModel(const ModelArtifact& artifact);
// kCorruptArtifact for unparsable or inconsistent content (bad shapes,
// non-finite values), kVersionMismatch for a foreign format or version; the
// version is checked before any weight is read.
ModelArtifact ParseModel(std::string_view text);

void SaveModel(const ModelArtifact& artifact, const std::string& path);
ModelArtifact LoadModel(const std::string& path);

}  // namespace rosas

#endif  // ROSAS_MODEL_IO_H_
