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

#include "rosas/pipeline.h"

#include <cmath>

#include "rosas/error.h"

namespace rosas {

using nlohmann::json;

json ToJson(const TrainConfig& c) {
  return {
      {"batch_size", c.batch_size},
      {"epochs", c.epochs},
      {"batches_per_epoch", c.batches_per_epoch},
      {"learning_rate", c.learning_rate},
      {"rep_dim", c.rep_dim},
      {"k", c.k},
      {"alpha", c.alpha},
      {"margin", c.margin},
      {"temperature", c.temperature},
      {"weight_decay", c.weight_decay},
      {"leaky_slope", c.leaky_slope},
      {"smooth_l1_beta", c.smooth_l1_beta},
      {"augmented_per_batch", c.augmented_per_batch},
      {"ablation", AblationModeName(c.ablation)},
      {"select_by_validation", c.select_by_validation},
      {"seed", c.seed},
  };
}

void UpdateFromJson(const json& j, TrainConfig& c) {
  if (!j.is_object()) Fail(ErrorCode::kInvalidParameter, "training config must be an object");
  try {
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.batches_per_epoch = j.value("batches_per_epoch", c.batches_per_epoch);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.rep_dim = j.value("rep_dim", c.rep_dim);
    c.k = j.value("k", c.k);
    c.alpha = j.value("alpha", c.alpha);
    c.margin = j.value("margin", c.margin);
    c.temperature = j.value("temperature", c.temperature);
    c.weight_decay = j.value("weight_decay", c.weight_decay);
    c.leaky_slope = j.value("leaky_slope", c.leaky_slope);
    c.smooth_l1_beta = j.value("smooth_l1_beta", c.smooth_l1_beta);
    c.augmented_per_batch = j.value("augmented_per_batch", c.augmented_per_batch);
    c.select_by_validation = j.value("select_by_validation", c.select_by_validation);
    c.seed = j.value("seed", c.seed);
    if (j.contains("ablation")) c.ablation = ParseAblationMode(j["ablation"].get<std::string>());
  } catch (const json::exception& e) {
    Fail(ErrorCode::kInvalidParameter, std::string("bad training config: ") + e.what());
  }
}

json ToJson(const PipelineOptions& o) {
  return {
      {"labeled_anomalies", o.labeled_anomalies},
      {"contamination", o.contamination},
      {"feature_fraction", o.feature_fraction},
      {"split", {o.ratios.train, o.ratios.valid, o.ratios.test}},
      {"train", ToJson(o.train)},
  };
}

PreparedData PrepareData(const Dataset& data, const PipelineOptions& options, bool split) {
  if (options.labeled_anomalies < 1) {
    Fail(ErrorCode::kUnusableDataset,
         "training needs at least one labeled anomaly (got budget " +
             std::to_string(options.labeled_anomalies) + ")");
  }
  if (!data.has_labels()) Fail(ErrorCode::kUnusableDataset, "training data carries no labels");
  const std::uint64_t seed = options.train.seed;
  Dataset d = data;
  if (split) {
    Rng rng = Substream(seed, "splits");
    d = SplitDataset(d, options.ratios, rng);
  }
  {
    Rng rng = Substream(seed, "labels");
    d = SelectLabeledAnomalies(d, options.labeled_anomalies, rng);
  }
  if (options.contamination >= 0.0) {
    Rng rng = Substream(seed, "contamination");
    d = AdjustContamination(d, {options.contamination, options.feature_fraction}, rng);
  }
  PreparedData out;
  out.normalized = MinMaxNormalize(d);
  out.raw = std::move(d);
  return out;
}

ExperimentResult RunExperiment(const Dataset& data, const PipelineOptions& options,
                               const std::optional<Dataset>& test,
                               const ProgressCallback& progress) {
  ExperimentResult result;
  result.prepared = PrepareData(data, options, !test.has_value());
  result.trained = Train(result.prepared.normalized, options.train, progress);

  Eigen::MatrixXd test_x;
  std::vector<int> test_y;
  if (test) {
    Require(test->has_labels(), "test set carries no labels");
    test_x = result.prepared.normalized.norm.Apply(test->x);
    test_y = test->labels;
  } else {
    const Dataset& n = result.prepared.normalized;
    const std::vector<Eigen::Index> rows = n.RowsWithRole(Role::kTest);
    test_x = n.Gather(rows);
    test_y = n.GatherLabels(rows);
  }
  const Eigen::VectorXd scores = Predict(result.trained.params, test_x);
  result.test_metrics =
      Evaluate(std::span<const double>(scores.data(), scores.size()), test_y);
  return result;
}

json HistoryToJson(const TrainHistory& history) {
  json epochs = json::array();
  for (const EpochRecord& r : history.epochs) {
    epochs.push_back({
        {"epoch", r.epoch},
        {"mean_loss", r.mean_loss},
        {"mean_reg", r.mean_reg},
        {"mean_weight", r.mean_weight},
        {"val_auc_pr", std::isnan(r.val_auc_pr) ? json(nullptr) : json(r.val_auc_pr)},
    });
  }
  return {{"epochs", std::move(epochs)},
          {"selected_epoch", history.selected_epoch},
          {"batch_weights", history.weights}};
}

}  // namespace rosas
