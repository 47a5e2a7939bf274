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

// The anomaly scoring network: a representation module mapping D inputs to an
// H-dimensional feature space, followed by a scoring module mapping features
// to a scalar in (-1, 1). Both modules have one LeakyReLU hidden layer:
//
//   rep:   D -> h1 -> H    with h1 = D + floor((H - D) / 2), linear output
//   score: H -> h2 -> 1    with h2 = floor(H / 2), tanh output
//
// Higher scores mean more anomalous.

#ifndef ROSAS_SCORER_H_
#define ROSAS_SCORER_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rosas/nn.h"

namespace rosas {

inline constexpr double kDefaultLeakySlope = 0.01;

struct Architecture {
  int input_dim = 0;  // D
  int rep_dim = 0;    // H
  int rep_hidden = 0;    // h1
  int score_hidden = 0;  // h2
};

// Applies the sizing rule. Throws kInvalidArchitecture when D < 1, H < 1 or a
// derived width is not positive (H = 1 gives h2 = 0).
Architecture MakeArchitecture(int input_dim, int rep_dim);

struct ScorerParams {
  static constexpr std::array<std::string_view, 4> kLayerNames = {
      "rep_hidden", "rep_out", "score_hidden", "score_out"};

  Architecture arch;
  double leaky_slope = kDefaultLeakySlope;
  nn::DenseLayer rep_hidden;    // h1 x D
  nn::DenseLayer rep_out;       // H x h1
  nn::DenseLayer score_hidden;  // h2 x H
  nn::DenseLayer score_out;     // 1 x h2

  std::array<const nn::DenseLayer*, 4> layers() const {
    return {&rep_hidden, &rep_out, &score_hidden, &score_out};
  }
  std::array<nn::DenseLayer*, 4> mutable_layers() {
    return {&rep_hidden, &rep_out, &score_hidden, &score_out};
  }
  std::vector<nn::ParamSlot> slots();

  // Shapes agree with `arch` and every entry is finite.
  bool IsValid() const;
};

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero. The generator is
// derived from `seed`, so equal seeds give bit-identical parameters.
ScorerParams BuildScorer(int input_dim, int rep_dim, std::uint64_t seed,
                         double leaky_slope = kDefaultLeakySlope);

// Single-sample paths.
Eigen::VectorXd Represent(const ScorerParams& params, const Eigen::VectorXd& x);
double Score(const ScorerParams& params, const Eigen::VectorXd& x);

// Scores every row of `x` (n x D), preserving row order.
Eigen::VectorXd ScoreBatch(const ScorerParams& params, const Eigen::MatrixXd& x);

// Cached activations of a batched forward pass (one sample per column).
struct ScorerForward {
  Eigen::MatrixXd inputs;          // D x n
  Eigen::MatrixXd rep_hidden_pre;  // h1 x n
  Eigen::MatrixXd rep_hidden_act;
  Eigen::MatrixXd representation;  // H x n
  Eigen::MatrixXd score_hidden_pre;  // h2 x n
  Eigen::MatrixXd score_hidden_act;
  Eigen::RowVectorXd scores;  // tanh outputs

  Eigen::Index batch_size() const { return inputs.cols(); }
};

ScorerForward ForwardBatch(const ScorerParams& params,
                           const Eigen::MatrixXd& inputs_by_column);

// Backpropagates dLoss/dscores and dLoss/drepresentation (either may be
// empty, meaning zero) into a freshly zeroed tape laid out as
// ScorerParams::layers().
nn::GradientTape Backward(const ScorerParams& params,
                          const ScorerForward& forward,
                          const Eigen::RowVectorXd& grad_scores,
                          const Eigen::MatrixXd& grad_representation);

}  // namespace rosas

#endif  // ROSAS_SCORER_H_
