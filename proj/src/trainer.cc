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

#include "rosas/trainer.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rosas/error.h"
#include "rosas/eval.h"

namespace rosas {
namespace {

std::vector<Eigen::Index> DistinctDraw(Eigen::Index pool, int count, Rng& rng) {
  std::vector<Eigen::Index> idx(pool);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, pool - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(count);
  return idx;
}

Eigen::MatrixXd Rows(const Eigen::MatrixXd& pool, const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), pool.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = pool.row(idx[i]);
  return out;
}

void CheckPositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    Fail(ErrorCode::kInvalidParameter, std::string(what) + " must be positive");
  }
}

}  // namespace

void TrainConfig::Validate() const {
  if (batch_size < 1) Fail(ErrorCode::kInvalidParameter, "batch size must be >= 1");
  if (epochs < 0) Fail(ErrorCode::kInvalidParameter, "epoch count must be >= 0");
  if (batches_per_epoch < 1) {
    Fail(ErrorCode::kInvalidParameter, "batches per epoch must be >= 1");
  }
  if (k < 2) Fail(ErrorCode::kInvalidParameter, "k must be >= 2");
  if (k > 2 * batch_size) {
    Fail(ErrorCode::kInvalidParameter, "k cannot exceed the 2b rows of a source batch");
  }
  if (augmented_per_batch < 0) {
    Fail(ErrorCode::kInvalidParameter, "augmented sample count must be >= 0");
  }
  CheckPositive(learning_rate, "learning rate");
  CheckPositive(alpha, "alpha");
  CheckPositive(margin, "margin");
  CheckPositive(temperature, "temperature");
  CheckPositive(smooth_l1_beta, "smooth-l1 beta");
  if (!(weight_decay >= 0.0)) Fail(ErrorCode::kInvalidParameter, "weight decay must be >= 0");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) {
    Fail(ErrorCode::kInvalidParameter, "LeakyReLU slope must lie in (0, 1)");
  }
  MakeArchitecture(1, rep_dim);
}

MiniBatches SampleBatches(const Eigen::MatrixXd& anomaly_pool,
                          const Eigen::MatrixXd& unlabeled_pool, int b, Rng& rng) {
  Require(b >= 1, "batch size must be >= 1");
  if (anomaly_pool.rows() == 0) {
    Fail(ErrorCode::kUnusableDataset, "no labeled anomalies to train on");
  }
  if (unlabeled_pool.rows() < 2 * b) {
    Fail(ErrorCode::kUnusableDataset,
         "unlabeled pool has " + std::to_string(unlabeled_pool.rows()) +
             " rows, a batch needs " + std::to_string(2 * b));
  }
  MiniBatches out;
  if (anomaly_pool.rows() >= b) {
    out.anomaly_rows = DistinctDraw(anomaly_pool.rows(), b, rng);
  } else {
    std::uniform_int_distribution<Eigen::Index> pick(0, anomaly_pool.rows() - 1);
    for (int i = 0; i < b; ++i) out.anomaly_rows.push_back(pick(rng));
  }
  std::vector<Eigen::Index> drawn = DistinctDraw(unlabeled_pool.rows(), 2 * b, rng);
  out.unlabeled_rows.assign(drawn.begin(), drawn.begin() + b);
  out.anchor_rows.assign(drawn.begin() + b, drawn.end());
  out.anomalies = Rows(anomaly_pool, out.anomaly_rows);
  out.unlabeled = Rows(unlabeled_pool, out.unlabeled_rows);
  out.anchors = Rows(unlabeled_pool, out.anchor_rows);
  return out;
}

ObjectiveBatch BuildObjectiveBatch(const MiniBatches& batches,
                                   const TrainConfig& config, Rng& rng) {
  const Eigen::Index b = batches.anomalies.rows();
  ObjectiveBatch out;
  out.sources.x.resize(2 * b, batches.anomalies.cols());
  out.sources.x << batches.anomalies, batches.unlabeled;
  out.sources.y.resize(2 * b);
  out.sources.y.head(b).setConstant(kLabeledAnomaly);
  out.sources.y.tail(b).setConstant(kUnlabeled);
  if (config.ablation != AblationMode::kPlainRegression) {
    out.augmented = AugmentBatch(out.sources, config.k, config.alpha,
                                 config.augmented_count(), rng);
  }
  out.triplets.anomalies = batches.anomalies;
  out.triplets.unlabeled = batches.unlabeled;
  out.triplets.anchors = batches.anchors;
  out.triplets.margin = config.margin;
  return out;
}

TrainResult Train(const Dataset& data, const TrainConfig& config,
                  const ProgressCallback& progress) {
  config.Validate();
  data.Validate();
  const Eigen::MatrixXd anomaly_pool = data.Gather(data.RowsWithRole(Role::kLabeledAnomaly));
  const Eigen::MatrixXd unlabeled_pool = data.Gather(data.RowsWithRole(Role::kUnlabeled));
  if (anomaly_pool.rows() == 0) {
    Fail(ErrorCode::kUnusableDataset, "no labeled anomalies to train on");
  }
  if (unlabeled_pool.rows() < 2 * config.batch_size) {
    Fail(ErrorCode::kUnusableDataset,
         "unlabeled pool has " + std::to_string(unlabeled_pool.rows()) +
             " rows, a batch needs " + std::to_string(2 * config.batch_size));
  }

  const std::vector<Eigen::Index> valid_rows = data.RowsWithRole(Role::kValid);
  Eigen::MatrixXd valid_x;
  std::vector<int> valid_y;
  bool can_select = false;
  if (config.select_by_validation && data.has_labels() && !valid_rows.empty()) {
    valid_x = data.Gather(valid_rows);
    valid_y = data.GatherLabels(valid_rows);
    const long pos = std::accumulate(valid_y.begin(), valid_y.end(), 0L);
    can_select = pos > 0 && pos < static_cast<long>(valid_y.size());
  }

  TrainResult result;
  result.params = BuildScorer(data.dim(), config.rep_dim, config.seed, config.leaky_slope);
  nn::AdamOptions adam_options;
  adam_options.learning_rate = config.learning_rate;
  adam_options.weight_decay = config.weight_decay;
  nn::Adam adam(adam_options);
  Rng batch_rng = Substream(config.seed, "batching");
  Rng augment_rng = Substream(config.seed, "augmentation");
  ObjectiveOptions objective_options{config.ablation, config.smooth_l1_beta};

  LossState state;
  state.temperature = config.temperature;
  ScorerParams& params = result.params;
  std::vector<nn::ParamSlot> slots = params.slots();
  double best_auc_pr = -std::numeric_limits<double>::infinity();
  ScorerParams best = params;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> losses, regs;
    double weight_sum = 0.0;
    for (int j = 1; j <= config.batches_per_epoch; ++j) {
      const MiniBatches batches =
          SampleBatches(anomaly_pool, unlabeled_pool, config.batch_size, batch_rng);
      const ObjectiveBatch batch = BuildObjectiveBatch(batches, config, augment_rng);
      const BatchObjective objective =
          BatchObjective::Forward(params, batch, objective_options);
      if (!std::isfinite(objective.loss()) || !std::isfinite(objective.reg())) {
        Fail(ErrorCode::kTrainingDiverged,
             "non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                 std::to_string(j));
      }
      const double w =
          ObjectiveWeight(config.ablation, objective.loss(), objective.reg(), state);
      try {
        adam.Step(slots, objective.Gradient(w));
      } catch (const Error& e) {
        Fail(e.code(), std::string(e.what()) + " (epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(j) + ")");
      }
      losses.push_back(objective.loss());
      regs.push_back(objective.reg());
      weight_sum += w;
      result.history.weights.push_back(w);
    }
    state = UpdateEpochAverages(state, losses, regs);

    EpochRecord record;
    record.epoch = epoch;
    record.mean_loss = state.mean_loss;
    record.mean_reg = config.ablation == AblationMode::kNoRegularizer
                          ? 0.0
                          : state.mean_reg;
    record.mean_weight = weight_sum / config.batches_per_epoch;
    record.val_auc_pr = std::numeric_limits<double>::quiet_NaN();
    if (can_select) {
      const Eigen::VectorXd s = ScoreBatch(params, valid_x);
      record.val_auc_pr = AucPr(std::span<const double>(s.data(), s.size()), valid_y);
      if (record.val_auc_pr > best_auc_pr) {
        best_auc_pr = record.val_auc_pr;
        best = params;
        result.history.selected_epoch = epoch;
      }
    }
    record.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.epochs.push_back(record);
    if (progress) progress(record);
  }

  if (can_select && config.epochs > 0) {
    params = best;
  } else {
    result.history.selected_epoch = config.epochs;
  }
  return result;
}

Eigen::VectorXd Predict(const ScorerParams& params, const Eigen::MatrixXd& x) {
  return ScoreBatch(params, x);
}

}  // namespace rosas
