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

#include "rosas/losses.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "rosas/error.h"

namespace rosas {
namespace {

constexpr std::pair<AblationMode, std::string_view> kModeNames[] = {
    {AblationMode::kFull, "full"},
    {AblationMode::kDiscreteTargets, "discrete_targets"},
    {AblationMode::kPlainRegression, "plain_regression"},
    {AblationMode::kNoConsistency, "no_consistency"},
    {AblationMode::kNoRegularizer, "no_regularizer"},
};

ScoringLossOptions ScoringOptionsFor(const ObjectiveOptions& options) {
  ScoringLossOptions out;
  out.beta = options.beta;
  out.consistency = options.mode != AblationMode::kNoConsistency;
  out.discrete_targets = options.mode == AblationMode::kDiscreteTargets;
  return out;
}

void CheckTriplets(const TripletBatch& t) {
  Require(t.size() > 0, "triplet batch is empty");
  Require(t.anomalies.rows() == t.size() && t.unlabeled.rows() == t.size(),
          "triplet blocks must have equal row counts");
  Require(t.margin > 0.0, "triplet margin must be positive");
}

void CheckSource(int src, const LabeledBatch& sources) {
  Require(src >= 0 && src < sources.size(),
          "augmented sample references source " + std::to_string(src) +
              " outside a batch of " + std::to_string(sources.size()));
}

}  // namespace

std::string_view AblationModeName(AblationMode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "unknown";
}

AblationMode ParseAblationMode(std::string_view name) {
  for (const auto& [m, n] : kModeNames) {
    if (n == name) return m;
  }
  Fail(ErrorCode::kInvalidParameter,
       "unknown ablation mode '" + std::string(name) + "'");
}

double SmoothL1(double pred, double target, double beta) {
  const double d = pred - target;
  const double a = std::abs(d);
  return a < beta ? 0.5 * d * d / beta : a - 0.5 * beta;
}

double SmoothL1Grad(double pred, double target, double beta) {
  const double d = pred - target;
  if (std::abs(d) < beta) return d / beta;
  return d > 0.0 ? 1.0 : -1.0;
}

double ScoringLoss(const ScorerParams& params,
                   std::span<const AugmentedSample> augmented,
                   const LabeledBatch& sources,
                   const ScoringLossOptions& options) {
  Require(!augmented.empty(), "scoring loss over an empty augmented batch");
  double total = 0.0;
  for (const AugmentedSample& s : augmented) {
    const double pred = Score(params, s.x_tilde);
    const double target =
        options.discrete_targets ? DiscreteTarget(s.y_tilde) : s.y_tilde;
    total += SmoothL1(pred, target, options.beta);
    if (options.consistency) {
      double mixed = 0.0;
      for (std::size_t i = 0; i < s.sources.size(); ++i) {
        CheckSource(s.sources[i], sources);
        mixed += s.lambdas[i] *
                 Score(params, sources.x.row(s.sources[i]).transpose());
      }
      total += SmoothL1(pred, mixed, options.beta);
    }
  }
  return total / static_cast<double>(augmented.size());
}

double PlainRegressionLoss(const ScorerParams& params,
                           const LabeledBatch& batch, double beta) {
  Require(batch.size() > 0, "regression loss over an empty batch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    total += SmoothL1(Score(params, batch.x.row(i).transpose()), batch.y(i),
                      beta);
  }
  return total / static_cast<double>(batch.size());
}

double FeatureRegularizer(const ScorerParams& params,
                          const TripletBatch& triplets) {
  CheckTriplets(triplets);
  double total = 0.0;
  for (Eigen::Index i = 0; i < triplets.size(); ++i) {
    const Eigen::VectorXd q = Represent(params, triplets.anchors.row(i).transpose());
    const double d_neg =
        (Represent(params, triplets.unlabeled.row(i).transpose()) - q).norm();
    const double d_pos =
        (Represent(params, triplets.anomalies.row(i).transpose()) - q).norm();
    total += TripletHinge(d_neg, d_pos, triplets.margin);
  }
  return total / static_cast<double>(triplets.size());
}

double DynamicWeight(double loss, double reg, const LossState& state) {
  Require(state.mean_loss > 0.0 && state.mean_reg > 0.0,
          "epoch average losses must be positive");
  Require(state.temperature > 0.0, "temperature must be positive");
  const double a = loss / (state.temperature * state.mean_loss);
  const double b = reg / (state.temperature * state.mean_reg);
  const double top = std::max(a, b);
  const double ea = std::exp(a - top);
  const double eb = std::exp(b - top);
  return ea / (ea + eb);
}

LossState UpdateEpochAverages(const LossState& state,
                              std::span<const double> batch_losses,
                              std::span<const double> batch_regs) {
  Require(!batch_losses.empty() && !batch_regs.empty(),
          "epoch average over an empty loss list");
  LossState next = state;
  next.mean_loss = std::accumulate(batch_losses.begin(), batch_losses.end(), 0.0) /
                   static_cast<double>(batch_losses.size());
  next.mean_reg = std::accumulate(batch_regs.begin(), batch_regs.end(), 0.0) /
                  static_cast<double>(batch_regs.size());
  // An epoch whose hinge never fired averages to exactly 0, which would leave
  // the next weight undefined.
  next.mean_loss = std::max(next.mean_loss, kMinEpochAverage);
  next.mean_reg = std::max(next.mean_reg, kMinEpochAverage);
  return next;
}

double ObjectiveWeight(AblationMode mode, double loss, double reg,
                       const LossState& state) {
  if (mode == AblationMode::kNoRegularizer) return 1.0;
  return DynamicWeight(loss, reg, state);
}

ObjectiveTerms EvaluateTerms(const ScorerParams& params,
                             const ObjectiveBatch& batch,
                             const ObjectiveOptions& options) {
  ObjectiveTerms terms;
  if (options.mode == AblationMode::kPlainRegression) {
    terms.loss = PlainRegressionLoss(params, batch.sources, options.beta);
  } else {
    terms.loss = ScoringLoss(params, batch.augmented, batch.sources,
                             ScoringOptionsFor(options));
  }
  if (options.mode != AblationMode::kNoRegularizer) {
    terms.reg = FeatureRegularizer(params, batch.triplets);
  }
  return terms;
}

double AblationObjective(const ScorerParams& params,
                         const ObjectiveBatch& batch,
                         const ObjectiveOptions& options,
                         const LossState& state) {
  const ObjectiveTerms t = EvaluateTerms(params, batch, options);
  const double w = ObjectiveWeight(options.mode, t.loss, t.reg, state);
  if (w == 1.0) return t.loss;
  return w * t.loss + (1.0 - w) * t.reg;
}

BatchObjective BatchObjective::Forward(const ScorerParams& params,
                                       const ObjectiveBatch& batch,
                                       const ObjectiveOptions& options) {
  return BatchObjective(params, batch, options);
}

BatchObjective::BatchObjective(const ScorerParams& params,
                               const ObjectiveBatch& batch,
                               const ObjectiveOptions& options)
    : params_(&params), batch_(&batch), options_(options) {
  const bool plain = options.mode == AblationMode::kPlainRegression;
  const bool with_reg = options.mode != AblationMode::kNoRegularizer;
  const Eigen::Index d = params.arch.input_dim;
  const Eigen::Index n_aug = plain ? 0 : static_cast<Eigen::Index>(batch.augmented.size());
  const Eigen::Index n_src = batch.sources.size();
  const Eigen::Index n_trip = with_reg ? batch.triplets.size() : 0;
  if (plain) {
    Require(n_src > 0, "regression loss over an empty batch");
  } else {
    Require(n_aug > 0, "scoring loss over an empty augmented batch");
  }
  if (with_reg) CheckTriplets(batch.triplets);
  Require(batch.sources.x.cols() == d || n_src == 0,
          "source batch width differs from scorer input");

  // Column layout: augmented | sources | anomalies | unlabeled | anchors.
  aug_begin_ = 0;
  src_begin_ = n_aug;
  pos_begin_ = src_begin_ + n_src;
  neg_begin_ = pos_begin_ + n_trip;
  anchor_begin_ = neg_begin_ + n_trip;
  Eigen::MatrixXd inputs(d, anchor_begin_ + n_trip);
  for (Eigen::Index j = 0; j < n_aug; ++j) {
    const AugmentedSample& s = batch.augmented[j];
    Require(s.x_tilde.size() == d, "augmented sample width differs from scorer input");
    inputs.col(aug_begin_ + j) = s.x_tilde;
  }
  if (n_src > 0) inputs.middleCols(src_begin_, n_src) = batch.sources.x.transpose();
  if (n_trip > 0) {
    inputs.middleCols(pos_begin_, n_trip) = batch.triplets.anomalies.transpose();
    inputs.middleCols(neg_begin_, n_trip) = batch.triplets.unlabeled.transpose();
    inputs.middleCols(anchor_begin_, n_trip) = batch.triplets.anchors.transpose();
  }
  forward_ = ForwardBatch(params, inputs);
  const ObjectiveTerms terms = EvaluateHead();
  loss_ = terms.loss;
  reg_ = terms.reg;
}

ObjectiveTerms BatchObjective::EvaluateHead() const {
  const ObjectiveBatch& batch = *batch_;
  const bool plain = options_.mode == AblationMode::kPlainRegression;
  const bool with_reg = options_.mode != AblationMode::kNoRegularizer;
  const Eigen::Index n_aug = src_begin_ - aug_begin_;
  const Eigen::Index n_src = pos_begin_ - src_begin_;
  const Eigen::Index n_trip = neg_begin_ - pos_begin_;
  const Eigen::RowVectorXd& s = forward_.scores;
  const double beta = options_.beta;
  ObjectiveTerms terms;

  if (plain) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n_src; ++i) {
      total += SmoothL1(s(src_begin_ + i), batch.sources.y(i), beta);
    }
    terms.loss = total / static_cast<double>(n_src);
  } else {
    const ScoringLossOptions so = ScoringOptionsFor(options_);
    double total = 0.0;
    for (Eigen::Index j = 0; j < n_aug; ++j) {
      const AugmentedSample& a = batch.augmented[j];
      const double pred = s(aug_begin_ + j);
      const double target = so.discrete_targets ? DiscreteTarget(a.y_tilde) : a.y_tilde;
      total += SmoothL1(pred, target, beta);
      if (so.consistency) {
        double mixed = 0.0;
        for (std::size_t i = 0; i < a.sources.size(); ++i) {
          CheckSource(a.sources[i], batch.sources);
          mixed += a.lambdas[i] * s(src_begin_ + a.sources[i]);
        }
        total += SmoothL1(pred, mixed, beta);
      }
    }
    terms.loss = total / static_cast<double>(n_aug);
  }

  if (with_reg) {
    const Eigen::MatrixXd& r = forward_.representation;
    double total = 0.0;
    for (Eigen::Index i = 0; i < n_trip; ++i) {
      const auto q = r.col(anchor_begin_ + i);
      const double d_neg = (r.col(neg_begin_ + i) - q).norm();
      const double d_pos = (r.col(pos_begin_ + i) - q).norm();
      total += TripletHinge(d_neg, d_pos, batch.triplets.margin);
    }
    terms.reg = total / static_cast<double>(n_trip);
  }
  return terms;
}

HeadGradient BatchObjective::LossHeadGradient(double w) const {
  const ObjectiveBatch& batch = *batch_;
  const bool plain = options_.mode == AblationMode::kPlainRegression;
  const bool with_reg = options_.mode != AblationMode::kNoRegularizer;
  const Eigen::Index n = forward_.batch_size();
  const Eigen::RowVectorXd& s = forward_.scores;
  const double beta = options_.beta;

  Eigen::RowVectorXd grad_scores = Eigen::RowVectorXd::Zero(n);
  if (plain) {
    const Eigen::Index n_src = batch.sources.size();
    const double scale = w / static_cast<double>(n_src);
    for (Eigen::Index i = 0; i < n_src; ++i) {
      grad_scores(src_begin_ + i) +=
          scale * SmoothL1Grad(s(src_begin_ + i), batch.sources.y(i), beta);
    }
  } else {
    const ScoringLossOptions so = ScoringOptionsFor(options_);
    const Eigen::Index n_aug = static_cast<Eigen::Index>(batch.augmented.size());
    const double scale = w / static_cast<double>(n_aug);
    for (Eigen::Index j = 0; j < n_aug; ++j) {
      const AugmentedSample& a = batch.augmented[j];
      const double pred = s(aug_begin_ + j);
      const double target = so.discrete_targets ? DiscreteTarget(a.y_tilde) : a.y_tilde;
      grad_scores(aug_begin_ + j) += scale * SmoothL1Grad(pred, target, beta);
      if (so.consistency) {
        double mixed = 0.0;
        for (std::size_t i = 0; i < a.sources.size(); ++i) {
          mixed += a.lambdas[i] * s(src_begin_ + a.sources[i]);
        }
        const double g = scale * SmoothL1Grad(pred, mixed, beta);
        grad_scores(aug_begin_ + j) += g;
        for (std::size_t i = 0; i < a.sources.size(); ++i) {
          grad_scores(src_begin_ + a.sources[i]) -= g * a.lambdas[i];
        }
      }
    }
  }

  Eigen::MatrixXd grad_rep;
  if (with_reg && w != 1.0) {
    const Eigen::MatrixXd& r = forward_.representation;
    grad_rep = Eigen::MatrixXd::Zero(r.rows(), n);
    const Eigen::Index n_trip = batch.triplets.size();
    const double scale = (1.0 - w) / static_cast<double>(n_trip);
    for (Eigen::Index i = 0; i < n_trip; ++i) {
      const Eigen::VectorXd to_neg = r.col(neg_begin_ + i) - r.col(anchor_begin_ + i);
      const Eigen::VectorXd to_pos = r.col(pos_begin_ + i) - r.col(anchor_begin_ + i);
      const double d_neg = to_neg.norm();
      const double d_pos = to_pos.norm();
      if (TripletHinge(d_neg, d_pos, batch.triplets.margin) <= 0.0) continue;
      // A zero distance has no direction; its subgradient is taken as 0.
      if (d_neg > 0.0) {
        const Eigen::VectorXd u = scale * to_neg / d_neg;
        grad_rep.col(neg_begin_ + i) += u;
        grad_rep.col(anchor_begin_ + i) -= u;
      }
      if (d_pos > 0.0) {
        const Eigen::VectorXd u = scale * to_pos / d_pos;
        grad_rep.col(pos_begin_ + i) -= u;
        grad_rep.col(anchor_begin_ + i) += u;
      }
    }
  }
  return {std::move(grad_scores), std::move(grad_rep)};
}

nn::GradientTape BatchObjective::Gradient(double w) const {
  const HeadGradient head = LossHeadGradient(w);
  return Backward(*params_, forward_, head.scores, head.representation);
}

}  // namespace rosas
