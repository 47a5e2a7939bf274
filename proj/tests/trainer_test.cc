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

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rosas/pipeline.h"
#include "rosas/synthetic.h"
#include "test_util.h"

namespace rosas {
namespace {

using ::rosas::testing::ErrorMessage;
using ::rosas::testing::ThrowsCode;

// One labeled anomaly and three unlabeled rows in 2-D.
Dataset FourSampleSet() {
  Eigen::MatrixXd x(4, 2);
  x << 0.9, 0.8, 0.1, 0.2, 0.3, 0.0, 0.0, 0.4;
  Dataset d = MakeDataset(x, {1, 0, 0, 0});
  d.roles = {Role::kLabeledAnomaly, Role::kUnlabeled, Role::kUnlabeled, Role::kUnlabeled};
  return d;
}

TrainConfig SmallConfig() {
  TrainConfig c;
  c.batch_size = 1;
  c.epochs = 1;
  c.batches_per_epoch = 1;
  c.rep_dim = 4;
  c.select_by_validation = false;
  c.seed = 17;
  return c;
}

double AdamFirstStep(double p, double g, const TrainConfig& c) {
  return p * (1.0 - c.learning_rate * c.weight_decay) - c.learning_rate * g / (std::abs(g) + 1e-8);
}

TEST(TrainerReplayTest, SingleStepMatchesHandReplay) {
  const Dataset data = FourSampleSet();
  const TrainConfig c = SmallConfig();
  const TrainResult trained = Train(data, c);

  // Replay: same streams, same batch, finite-difference gradient, hand Adam.
  ScorerParams p = BuildScorer(2, c.rep_dim, c.seed);
  Rng batch_rng = Substream(c.seed, "batching");
  Rng augment_rng = Substream(c.seed, "augmentation");
  const Eigen::MatrixXd pos = data.Gather(data.RowsWithRole(Role::kLabeledAnomaly));
  const Eigen::MatrixXd unl = data.Gather(data.RowsWithRole(Role::kUnlabeled));
  const ObjectiveBatch batch =
      BuildObjectiveBatch(SampleBatches(pos, unl, c.batch_size, batch_rng), c, augment_rng);
  const ObjectiveTerms t = EvaluateTerms(p, batch, {});
  const double a = std::exp(t.loss / c.temperature), b = std::exp(t.reg / c.temperature);
  const double w = a / (a + b);
  ASSERT_EQ(trained.history.weights.size(), 1u);
  EXPECT_NEAR(trained.history.weights[0], w, 1e-14);
  EXPECT_NEAR(trained.history.epochs[0].mean_loss, t.loss, 1e-14);
  EXPECT_NEAR(trained.history.epochs[0].mean_reg, t.reg, 1e-14);

  constexpr double kStep = 1e-6;
  auto objective = [&] {
    const ObjectiveTerms u = EvaluateTerms(p, batch, {});
    return w * u.loss + (1.0 - w) * u.reg;
  };
  ScorerParams expected = p;
  auto layers = p.mutable_layers();
  auto out = expected.mutable_layers();
  double worst = 0.0;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    auto visit = [&](double& v, double& target) {
      const double saved = v;
      v = saved + kStep;
      const double up = objective();
      v = saved - kStep;
      const double down = objective();
      v = saved;
      const double g = (up - down) / (2 * kStep);
      // Entries with vanishing gradient only see weight decay; elsewhere a
      // tiny FD error moves g / (|g| + eps) noticeably, so skip the band in
      // between.
      if (std::abs(g) > 1e-4 || std::abs(g) < 1e-12) {
        target = AdamFirstStep(saved, std::abs(g) < 1e-12 ? 0.0 : g, c);
      }
    };
    for (Eigen::Index k = 0; k < layers[li]->weights.size(); ++k) {
      visit(layers[li]->weights.data()[k], out[li]->weights.data()[k]);
    }
    for (Eigen::Index k = 0; k < layers[li]->bias.size(); ++k) {
      visit(layers[li]->bias.data()[k], out[li]->bias.data()[k]);
    }
  }
  int compared = 0;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const nn::DenseLayer& got = *trained.params.layers()[li];
    const nn::DenseLayer& want = *expected.layers()[li];
    const nn::DenseLayer& init = *p.layers()[li];
    for (Eigen::Index k = 0; k < got.weights.size(); ++k) {
      if (want.weights.data()[k] == init.weights.data()[k]) continue;  // skipped band
      worst = std::max(worst, std::abs(got.weights.data()[k] - want.weights.data()[k]));
      ++compared;
    }
  }
  EXPECT_GT(compared, 10);
  EXPECT_LT(worst, 1e-9);
}

TEST(TrainerReplayTest, EpochAveragesUpdateOncePerEpoch) {
  const Dataset data = FourSampleSet();
  TrainConfig c = SmallConfig();
  c.epochs = 2;
  c.batches_per_epoch = 3;
  const TrainResult trained = Train(data, c);

  ScorerParams p = BuildScorer(2, c.rep_dim, c.seed);
  nn::AdamOptions ao;
  ao.learning_rate = c.learning_rate;
  ao.weight_decay = c.weight_decay;
  nn::Adam adam(ao);
  std::vector<nn::ParamSlot> slots = p.slots();
  Rng batch_rng = Substream(c.seed, "batching");
  Rng augment_rng = Substream(c.seed, "augmentation");
  const Eigen::MatrixXd pos = data.Gather(data.RowsWithRole(Role::kLabeledAnomaly));
  const Eigen::MatrixXd unl = data.Gather(data.RowsWithRole(Role::kUnlabeled));
  double mean_loss = 1.0, mean_reg = 1.0;
  std::vector<double> weights;
  for (int e = 0; e < c.epochs; ++e) {
    double sum_loss = 0.0, sum_reg = 0.0;
    for (int j = 0; j < c.batches_per_epoch; ++j) {
      const ObjectiveBatch batch =
          BuildObjectiveBatch(SampleBatches(pos, unl, 1, batch_rng), c, augment_rng);
      const BatchObjective obj = BatchObjective::Forward(p, batch, {});
      const double a = std::exp(obj.loss() / (c.temperature * mean_loss));
      const double b = std::exp(obj.reg() / (c.temperature * mean_reg));
      weights.push_back(a / (a + b));
      adam.Step(slots, obj.Gradient(weights.back()));
      sum_loss += obj.loss();
      sum_reg += obj.reg();
    }
    mean_loss = std::max(sum_loss / c.batches_per_epoch, kMinEpochAverage);
    mean_reg = std::max(sum_reg / c.batches_per_epoch, kMinEpochAverage);
    EXPECT_NEAR(trained.history.epochs[e].mean_loss, mean_loss, 1e-14);
  }
  ASSERT_EQ(trained.history.weights.size(), weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    EXPECT_NEAR(trained.history.weights[i], weights[i], 1e-14) << i;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(trained.params.layers()[i]->weights.isApprox(p.layers()[i]->weights, 1e-12));
  }
}

TEST(TrainerTest, DeterministicForSeed) {
  const Dataset data = FourSampleSet();
  TrainConfig c = SmallConfig();
  c.epochs = 3;
  const TrainResult a = Train(data, c), b = Train(data, c);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.params.layers()[i]->weights, b.params.layers()[i]->weights);
  }
  EXPECT_EQ(a.history.weights, b.history.weights);
}

TEST(TrainerTest, NoRegularizerRunsWithUnitWeight) {
  TrainConfig c = SmallConfig();
  c.epochs = 2;
  c.ablation = AblationMode::kNoRegularizer;
  const TrainResult r = Train(FourSampleSet(), c);
  for (double w : r.history.weights) EXPECT_EQ(w, 1.0);
  EXPECT_EQ(r.history.epochs.back().mean_reg, 0.0);
  EXPECT_TRUE(r.params.IsValid());
}

TEST(TrainerTest, EveryAblationModeTrains) {
  for (AblationMode m : {AblationMode::kFull, AblationMode::kDiscreteTargets,
                         AblationMode::kPlainRegression, AblationMode::kNoConsistency,
                         AblationMode::kNoRegularizer}) {
    TrainConfig c = SmallConfig();
    c.epochs = 2;
    c.ablation = m;
    EXPECT_NO_THROW(Train(FourSampleSet(), c)) << AblationModeName(m);
  }
}

TEST(TrainerTest, TrainedScorerRanksTrainingAnomaliesHigher) {
  const Dataset toy = GenerateToy(3000, 2).data;
  PipelineOptions o;
  o.train.epochs = 20;
  o.train.seed = 2;
  const PreparedData prepared = PrepareData(toy, o, true);
  const TrainResult r = Train(prepared.normalized, o.train);
  const Dataset& d = prepared.normalized;
  const Eigen::VectorXd pos = Predict(r.params, d.Gather(d.RowsWithRole(Role::kLabeledAnomaly)));
  const Eigen::VectorXd unl = Predict(r.params, d.Gather(d.RowsWithRole(Role::kUnlabeled)));
  EXPECT_GT(pos.mean(), unl.mean());
  EXPECT_GE(r.history.selected_epoch, 1);
  EXPECT_LE(r.history.selected_epoch, 20);
}

TEST(TrainerTest, ModelSelectionReturnsSelectedEpochParameters) {
  const Dataset toy = GenerateToy(2000, 3).data;
  PipelineOptions o;
  o.train.epochs = 8;
  o.train.seed = 3;
  const Dataset d = PrepareData(toy, o, true).normalized;
  const TrainResult selected = Train(d, o.train);
  const int epoch = selected.history.selected_epoch;
  ASSERT_GE(epoch, 1);
  TrainConfig replay = o.train;
  replay.epochs = epoch;
  replay.select_by_validation = false;
  const TrainResult direct = Train(d, replay);
  EXPECT_EQ(selected.params.score_out.weights, direct.params.score_out.weights);
  EXPECT_EQ(selected.params.rep_hidden.weights, direct.params.rep_hidden.weights);
  double best = -1.0;
  for (const EpochRecord& e : selected.history.epochs) best = std::max(best, e.val_auc_pr);
  EXPECT_EQ(selected.history.epochs[epoch - 1].val_auc_pr, best);
}

TEST(TrainerTest, WithoutValidationKeepsLastEpoch) {
  TrainConfig c = SmallConfig();
  c.epochs = 4;
  c.select_by_validation = true;  // no kValid rows in the set
  const TrainResult r = Train(FourSampleSet(), c);
  EXPECT_EQ(r.history.selected_epoch, 4);
  EXPECT_TRUE(std::isnan(r.history.epochs[0].val_auc_pr));
}

TEST(TrainerTest, PoolErrors) {
  Dataset no_anomaly = FourSampleSet();
  no_anomaly.roles[0] = Role::kUnlabeled;
  EXPECT_TRUE(ThrowsCode([&] { Train(no_anomaly, SmallConfig()); }, ErrorCode::kUnusableDataset));
  TrainConfig wide = SmallConfig();
  wide.batch_size = 2;
  EXPECT_TRUE(ThrowsCode([&] { Train(FourSampleSet(), wide); }, ErrorCode::kUnusableDataset));
}

TEST(TrainerTest, SmallAnomalyPoolIsSampledWithReplacement) {
  Rng rng(1);
  const MiniBatches mb =
      SampleBatches(Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Zero(10, 3), 5, rng);
  EXPECT_EQ(mb.anomalies.rows(), 5);
  std::vector<Eigen::Index> drawn = mb.unlabeled_rows;
  drawn.insert(drawn.end(), mb.anchor_rows.begin(), mb.anchor_rows.end());
  std::sort(drawn.begin(), drawn.end());
  EXPECT_EQ(std::adjacent_find(drawn.begin(), drawn.end()), drawn.end());
}

TEST(TrainerTest, ConfigValidation) {
  const Dataset d = FourSampleSet();
  auto with = [&](auto mutate) {
    TrainConfig c = SmallConfig();
    mutate(c);
    return [=] { Train(d, c); };
  };
  EXPECT_TRUE(ThrowsCode(with([](TrainConfig& c) { c.batch_size = 0; }),
                         ErrorCode::kInvalidParameter));
  EXPECT_TRUE(ThrowsCode(with([](TrainConfig& c) { c.learning_rate = 0; }),
                         ErrorCode::kInvalidParameter));
  EXPECT_TRUE(ThrowsCode(with([](TrainConfig& c) { c.k = 1; }), ErrorCode::kInvalidParameter));
  EXPECT_TRUE(ThrowsCode(with([](TrainConfig& c) { c.k = 3; }), ErrorCode::kInvalidParameter));
  EXPECT_TRUE(ThrowsCode(with([](TrainConfig& c) { c.alpha = -1; }),
                         ErrorCode::kInvalidParameter));
  EXPECT_TRUE(ThrowsCode(with([](TrainConfig& c) { c.rep_dim = 1; }),
                         ErrorCode::kInvalidArchitecture));
}

TEST(TrainerTest, OverflowReportsDivergenceWithCoordinates) {
  Dataset d = FourSampleSet();
  d.x *= 1e300;
  const std::string msg = ErrorMessage([&] { Train(d, SmallConfig()); });
  EXPECT_TRUE(ThrowsCode([&] { Train(d, SmallConfig()); }, ErrorCode::kTrainingDiverged));
  EXPECT_NE(msg.find("epoch 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("batch 1"), std::string::npos) << msg;
}

}  // namespace
}  // namespace rosas
