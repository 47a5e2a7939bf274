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

// Command implementations behind the `rosas` executable. Each command writes
// exactly one run manifest:
//
//   {"command", "config_hash", "dataset_fingerprint", "seed", "metrics",
//    "wall_clock_seconds", "outputs"}
//
// config_hash and dataset_fingerprint are 64-bit FNV-1a digests (hex) of the
// canonical config JSON and of the input file bytes.

#ifndef ROSAS_COMMANDS_H_
#define ROSAS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rosas/eval.h"
#include "rosas/pipeline.h"

namespace rosas {

// $ROSAS_OUTPUT_DIR when set, "." otherwise.
std::string DefaultOutputDir();

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string dataset_fingerprint;
  std::uint64_t seed = 0;
  nlohmann::json metrics = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  double wall_clock_seconds = 0.0;

  nlohmann::json ToJson() const;
};

void WriteManifest(const RunManifest& manifest, const std::string& path);
std::string HashHex(std::uint64_t h);
std::string FileFingerprint(const std::string& path);

struct TrainCommandOptions {
  std::string data_path;
  std::string label_column = "label";
  PipelineOptions pipeline;
  std::string out_dir;  // empty: DefaultOutputDir()
  bool quiet = true;
};

struct TrainCommandOutput {
  std::string model_path;     // <out>/model.json
  std::string history_path;   // <out>/history.json
  std::string test_path;      // <out>/test.csv, held-out rows, raw values
  std::string valid_path;     // <out>/valid.csv
  std::string manifest_path;  // <out>/manifest.json
  RunManifest manifest;
};

TrainCommandOutput RunTrainCommand(const TrainCommandOptions& options);

struct EvaluateCommandOptions {
  std::string model_path;
  std::string data_path;
  std::string label_column = "label";
  std::string manifest_path;  // empty: <DefaultOutputDir()>/evaluate-manifest.json
};

MetricsReport RunEvaluateCommand(const EvaluateCommandOptions& options);

struct ScoreCommandOptions {
  std::string model_path;
  std::string data_path;
  // Excluded from the features without being read.
  std::optional<std::string> label_column;
  std::string out_path;       // empty: <DefaultOutputDir()>/scores.csv
  std::string manifest_path;  // empty: <DefaultOutputDir()>/score-manifest.json
};

// Writes "row,score" lines in input order.
std::string RunScoreCommand(const ScoreCommandOptions& options);

struct SynthesizeCommandOptions {
  std::string kind = "toy";  // toy | clustered | scattered | novel
  int n = 5000;
  std::uint64_t seed = 0;
  double anomaly_fraction = 0.05;
  std::string out_dir;
};

// toy -> <out>/toy.csv; cases -> <out>/train.csv and <out>/test.csv.
std::vector<std::string> RunSynthesizeCommand(const SynthesizeCommandOptions& options);

// Sweep configuration (JSON):
//   {"data": "file.csv", "label_col": "label"}  or
//   {"synthetic": {"kind": "toy", "n": 5000, "anomaly_fraction": 0.05}},
//   "contamination_levels": [...], "labeled_budgets": [...],
//   "repeats": 3, "seed": 0, "train": {TrainConfig fields},
//   "labeled_anomalies": 30, "contamination": 0.02
//
// Contamination levels are run at the default labeled budget and budgets at
// the default contamination. Output columns, in order:
inline constexpr const char* kSweepColumns =
    "sweep,setting,repeat,seed,auc_pr,auc_roc,status";

struct SweepCell {
  std::string sweep;  // "contamination" or "labeled"
  double setting = 0.0;
  int repeat = 0;
  std::uint64_t seed = 0;
  double auc_pr = 0.0;
  double auc_roc = 0.0;
  std::string status = "ok";
};

std::vector<SweepCell> RunSweep(const nlohmann::json& config);
std::string FormatSweep(const std::vector<SweepCell>& cells);

struct SweepCommandOptions {
  std::string config_path;
  std::string out_path;       // empty: <DefaultOutputDir()>/sweep.csv
  std::string manifest_path;  // empty: <DefaultOutputDir()>/sweep-manifest.json
};

std::vector<SweepCell> RunSweepCommand(const SweepCommandOptions& options);

}  // namespace rosas

#endif  // ROSAS_COMMANDS_H_
