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

// End-to-end experiment plumbing shared by the train and sweep commands:
// split -> select labeled anomalies -> adjust contamination -> normalize ->
// train -> score held-out rows.

#ifndef ROSAS_PIPELINE_H_
#define ROSAS_PIPELINE_H_

#include <cstdint>
#include <optional>

#include "json.hpp"
#include "rosas/data.h"
#include "rosas/eval.h"
#include "rosas/trainer.h"

namespace rosas {

struct PipelineOptions {
  int labeled_anomalies = 30;
  // Negative leaves the unlabeled pool as the split produced it.
  double contamination = 0.02;
  double feature_fraction = 0.05;
  // Stratified train/valid/test split; skipped when the caller passes a
  // separate test set.
  SplitRatios ratios;
  TrainConfig train;
};

nlohmann::json ToJson(const TrainConfig& config);
// Fields absent from `j` keep the values already in `config`.
void UpdateFromJson(const nlohmann::json& j, TrainConfig& config);
nlohmann::json ToJson(const PipelineOptions& options);

struct PreparedData {
  Dataset raw;         // roles assigned, original feature values
  Dataset normalized;  // what the trainer sees
};

// Rejects a zero labeled-anomaly budget before touching the data.
PreparedData PrepareData(const Dataset& data, const PipelineOptions& options,
                         bool split);

struct ExperimentResult {
  TrainResult trained;
  PreparedData prepared;
  MetricsReport test_metrics;
};

// With `test` unset, evaluates on the kTest rows of the split; otherwise
// `data` is used whole for training/validation-free selection and `test` is
// normalized with the training statistics.
ExperimentResult RunExperiment(const Dataset& data, const PipelineOptions& options,
                               const std::optional<Dataset>& test = std::nullopt,
                               const ProgressCallback& progress = {});

nlohmann::json HistoryToJson(const TrainHistory& history);

}  // namespace rosas

#endif  // ROSAS_PIPELINE_H_
