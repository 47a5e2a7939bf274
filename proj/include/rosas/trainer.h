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

// The training loop: per batch, sample labeled anomalies, unlabeled samples
// and anchors, interpolate, evaluate both loss terms, weight them and take
// one Adam step; per epoch, refresh the loss averages and optionally keep the
// snapshot with the best validation AUC-PR.

#ifndef ROSAS_TRAINER_H_
#define ROSAS_TRAINER_H_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rosas/data.h"
#include "rosas/losses.h"
#include "rosas/random.h"
#include "rosas/scorer.h"

namespace rosas {

struct TrainConfig {
  int batch_size = 32;          // b
  int epochs = 50;              // n_epoch
  int batches_per_epoch = 20;   // n_batch
  double learning_rate = 0.005;
  int rep_dim = 128;            // H
  int k = 2;                    // sources per augmented sample
  double alpha = 0.5;           // Beta / Dirichlet concentration
  double margin = 1.0;          // e
  double temperature = 2.0;     // T
  double weight_decay = 1e-5;
  double leaky_slope = kDefaultLeakySlope;
  double smooth_l1_beta = 1.0;
  // Augmented samples per batch; 0 means 2b.
  int augmented_per_batch = 0;
  AblationMode ablation = AblationMode::kFull;
  bool select_by_validation = true;
  std::uint64_t seed = 0;

  int augmented_count() const {
    return augmented_per_batch > 0 ? augmented_per_batch : 2 * batch_size;
  }
  // Throws kInvalidParameter on out-of-range values.
  void Validate() const;
};

struct EpochRecord {
  int epoch = 0;             // 1-based
  double mean_loss = 0.0;    // L averaged over the epoch's batches
  double mean_reg = 0.0;     // L'
  double mean_weight = 0.0;  // w
  double val_auc_pr = 0.0;   // NaN without a usable validation split
  double seconds = 0.0;      // wall clock, not part of determinism checks
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::vector<double> weights;  // w of every batch, in order
  int selected_epoch = 0;       // 0 = initial parameters
};

struct TrainResult {
  ScorerParams params;
  TrainHistory history;
};

struct MiniBatches {
  Eigen::MatrixXd anomalies;  // B_A, b rows
  Eigen::MatrixXd unlabeled;  // B_U, b rows
  Eigen::MatrixXd anchors;    // B_q, b rows
  std::vector<Eigen::Index> anomaly_rows;  // indices into the pools
  std::vector<Eigen::Index> unlabeled_rows;
  std::vector<Eigen::Index> anchor_rows;
};

// B_A is drawn without replacement when the anomaly pool holds at least b
// rows and with replacement otherwise; 2b distinct unlabeled rows are split
// into B_U and B_q. Throws kUnusableDataset for an empty anomaly pool or an
// unlabeled pool smaller than 2b.
MiniBatches SampleBatches(const Eigen::MatrixXd& anomaly_pool,
                          const Eigen::MatrixXd& unlabeled_pool, int b, Rng& rng);

// Sources are B_A (y=+1) followed by B_U (y=-1); triplets pair row i of
// B_A, B_U and B_q. No augmentation is drawn for kPlainRegression.
ObjectiveBatch BuildObjectiveBatch(const MiniBatches& batches,
                                   const TrainConfig& config, Rng& rng);

using ProgressCallback = std::function<void(const EpochRecord&)>;

// Trains on the kLabeledAnomaly and kUnlabeled rows of `data`; kValid rows
// with both classes drive model selection. Throws kTrainingDiverged with the
// epoch and batch when a loss or gradient becomes non-finite.
TrainResult Train(const Dataset& data, const TrainConfig& config,
                  const ProgressCallback& progress = {});

// Scores rows of `x`; never reads labels.
Eigen::VectorXd Predict(const ScorerParams& params, const Eigen::MatrixXd& x);

}  // namespace rosas

#endif  // ROSAS_TRAINER_H_
