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

// Training objective: the interpolation scoring loss with its consistency
// term, the triplet margin regularizer on representations, and the dynamic
// weight that balances the two.

#ifndef ROSAS_LOSSES_H_
#define ROSAS_LOSSES_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rosas/nn.h"
#include "rosas/scorer.h"
#include "rosas/supervision.h"

namespace rosas {

enum class AblationMode {
  kFull,
  kDiscreteTargets,  // interpolation targets replaced by sign(y_tilde)
  kPlainRegression,  // no interpolation: regress raw +1/-1 labels
  kNoConsistency,    // scoring loss without its consistency term
  kNoRegularizer,    // w fixed to 1, regularizer dropped
};

std::string_view AblationModeName(AblationMode mode);
// Throws kInvalidParameter on unknown names.
AblationMode ParseAblationMode(std::string_view name);

// Huber-style loss on d = pred - target:
// 0.5 d^2 / beta if |d| < beta, |d| - 0.5 beta otherwise.
double SmoothL1(double pred, double target, double beta = 1.0);
// d SmoothL1 / d pred.
double SmoothL1Grad(double pred, double target, double beta = 1.0);

// sign(y) with ties at zero sent to -1.
inline double DiscreteTarget(double y_tilde) {
  return y_tilde > 0.0 ? 1.0 : -1.0;
}

struct ScoringLossOptions {
  double beta = 1.0;
  bool consistency = true;
  bool discrete_targets = false;
};

// Mean over augmented samples of
//   l(f(x_tilde), y_tilde) + l(f(x_tilde), sum_i lambda_i f(x_i)).
// Evaluated sample by sample through Score(). Throws kContractViolation on a
// dangling source index or an empty augmented list.
double ScoringLoss(const ScorerParams& params,
                   std::span<const AugmentedSample> augmented,
                   const LabeledBatch& sources,
                   const ScoringLossOptions& options = {});

// Mean of SmoothL1(f(x_i), y_i) over the raw batch.
double PlainRegressionLoss(const ScorerParams& params,
                           const LabeledBatch& batch, double beta = 1.0);

// Row i of each block forms one (anomaly, unlabeled, anchor) triplet.
struct TripletBatch {
  Eigen::MatrixXd anomalies;
  Eigen::MatrixXd unlabeled;
  Eigen::MatrixXd anchors;
  double margin = 1.0;

  Eigen::Index size() const { return anchors.rows(); }
};

inline double TripletHinge(double dist_unlabeled, double dist_anomaly,
                           double margin) {
  const double h = dist_unlabeled - dist_anomaly + margin;
  return h < 0.0 ? 0.0 : h;  // NaN passes through
}

// Mean over rows of max(|phi(x-) - phi(q)| - |phi(x+) - phi(q)| + e, 0).
double FeatureRegularizer(const ScorerParams& params,
                          const TripletBatch& triplets);

struct LossState {
  double mean_loss = 1.0;  // average scoring loss of the last epoch
  double mean_reg = 1.0;   // average regularizer of the last epoch
  double temperature = 2.0;
};

// w = exp(L / (T Lbar)) / (exp(L / (T Lbar)) + exp(L' / (T Lbar'))),
// evaluated with the larger exponent subtracted first.
double DynamicWeight(double loss, double reg, const LossState& state);

inline constexpr double kMinEpochAverage = 1e-8;

// Replaces the epoch averages by the means of the per-batch losses, floored
// at kMinEpochAverage.
LossState UpdateEpochAverages(const LossState& state,
                              std::span<const double> batch_losses,
                              std::span<const double> batch_regs);

// Weight actually applied to the scoring loss: 1 when the regularizer is
// ablated, DynamicWeight otherwise.
double ObjectiveWeight(AblationMode mode, double loss, double reg,
                       const LossState& state);

// Everything a single optimizer step consumes.
struct ObjectiveBatch {
  LabeledBatch sources;  // labeled anomalies (y=+1) and unlabeled (y=-1)
  std::vector<AugmentedSample> augmented;
  TripletBatch triplets;
};

struct ObjectiveOptions {
  AblationMode mode = AblationMode::kFull;
  double beta = 1.0;
};

// Pure evaluation of both terms for `mode`, sample by sample.
struct ObjectiveTerms {
  double loss = 0.0;
  double reg = 0.0;
};
ObjectiveTerms EvaluateTerms(const ScorerParams& params,
                             const ObjectiveBatch& batch,
                             const ObjectiveOptions& options);

// w L + (1 - w) L' with w from ObjectiveWeight.
double AblationObjective(const ScorerParams& params,
                         const ObjectiveBatch& batch,
                         const ObjectiveOptions& options,
                         const LossState& state);

// Batched forward pass over every sample one step needs, with the loss terms
// and the cached activations required to differentiate them.
// Gradients of the weighted objective with respect to the batched scores
// (1 x n) and representations (H x n); empty when a term is inactive.
struct HeadGradient {
  Eigen::RowVectorXd scores;
  Eigen::MatrixXd representation;
};

class BatchObjective {
 public:
  static BatchObjective Forward(const ScorerParams& params,
                                const ObjectiveBatch& batch,
                                const ObjectiveOptions& options);

  double loss() const { return loss_; }
  double reg() const { return reg_; }

  // Gradient of w * loss + (1 - w) * reg, with w held constant.
  nn::GradientTape Gradient(double w) const;

  // Loss-side work on the cached network outputs, without another pass
  // through the scorer.
  ObjectiveTerms EvaluateHead() const;
  HeadGradient LossHeadGradient(double w) const;

 private:
  BatchObjective(const ScorerParams& params, const ObjectiveBatch& batch,
                 const ObjectiveOptions& options);

  const ScorerParams* params_;
  const ObjectiveBatch* batch_;
  ObjectiveOptions options_;
  ScorerForward forward_;
  Eigen::Index aug_begin_ = 0, src_begin_ = 0, pos_begin_ = 0,
               neg_begin_ = 0, anchor_begin_ = 0;
  double loss_ = 0.0;
  double reg_ = 0.0;
};

}  // namespace rosas

#endif  // ROSAS_LOSSES_H_
