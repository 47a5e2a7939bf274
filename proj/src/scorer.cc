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

#include "rosas/scorer.h"

#include <cmath>
#include <string>

#include "rosas/error.h"
#include "rosas/random.h"

namespace rosas {
namespace {

int FloorHalf(int v) {
  return v >= 0 ? v / 2 : -((-v + 1) / 2);
}

void InitLayer(nn::DenseLayer& layer, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in_size()));
  std::uniform_real_distribution<double> dist(-bound, bound);
  // Row-major fill so the draw order does not depend on storage layout.
  for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      layer.weights(r, c) = dist(rng);
    }
  }
  layer.bias.setZero();
}

void CheckDim(Eigen::Index got, int want) {
  if (got != want) {
    Fail(ErrorCode::kContractViolation,
         "scorer expects " + std::to_string(want) + " features, got " +
             std::to_string(got));
  }
}

}  // namespace

Architecture MakeArchitecture(int input_dim, int rep_dim) {
  if (input_dim < 1 || rep_dim < 1) {
    Fail(ErrorCode::kInvalidArchitecture,
         "input and representation dimensions must be positive (D=" +
             std::to_string(input_dim) + ", H=" + std::to_string(rep_dim) +
             ")");
  }
  Architecture arch;
  arch.input_dim = input_dim;
  arch.rep_dim = rep_dim;
  arch.rep_hidden = input_dim + FloorHalf(rep_dim - input_dim);
  arch.score_hidden = FloorHalf(rep_dim);
  if (arch.rep_hidden <= 0 || arch.score_hidden <= 0) {
    Fail(ErrorCode::kInvalidArchitecture,
         "hidden widths h1=" + std::to_string(arch.rep_hidden) +
             ", h2=" + std::to_string(arch.score_hidden) +
             " must be positive (D=" + std::to_string(input_dim) +
             ", H=" + std::to_string(rep_dim) + ")");
  }
  return arch;
}

std::vector<nn::ParamSlot> ScorerParams::slots() {
  auto ls = mutable_layers();
  std::vector<nn::ParamSlot> out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    out.push_back({std::string(kLayerNames[i]), ls[i]});
  }
  return out;
}

bool ScorerParams::IsValid() const {
  auto shaped = [](const nn::DenseLayer& l, int in, int out) {
    return l.weights.rows() == out && l.weights.cols() == in &&
           l.bias.size() == out && l.AllFinite();
  };
  return arch.input_dim >= 1 && arch.rep_hidden >= 1 &&
         arch.rep_dim >= 1 && arch.score_hidden >= 1 &&
         shaped(rep_hidden, arch.input_dim, arch.rep_hidden) &&
         shaped(rep_out, arch.rep_hidden, arch.rep_dim) &&
         shaped(score_hidden, arch.rep_dim, arch.score_hidden) &&
         shaped(score_out, arch.score_hidden, 1) && std::isfinite(leaky_slope);
}

ScorerParams BuildScorer(int input_dim, int rep_dim, std::uint64_t seed,
                         double leaky_slope) {
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) {
    Fail(ErrorCode::kInvalidParameter, "LeakyReLU slope must lie in (0, 1)");
  }
  ScorerParams params;
  params.arch = MakeArchitecture(input_dim, rep_dim);
  params.leaky_slope = leaky_slope;
  const Architecture& a = params.arch;
  params.rep_hidden = nn::DenseLayer(a.input_dim, a.rep_hidden);
  params.rep_out = nn::DenseLayer(a.rep_hidden, a.rep_dim);
  params.score_hidden = nn::DenseLayer(a.rep_dim, a.score_hidden);
  params.score_out = nn::DenseLayer(a.score_hidden, 1);
  Rng rng = Substream(seed, "init");
  for (nn::DenseLayer* layer : params.mutable_layers()) InitLayer(*layer, rng);
  return params;
}

Eigen::VectorXd Represent(const ScorerParams& params,
                          const Eigen::VectorXd& x) {
  CheckDim(x.size(), params.arch.input_dim);
  Eigen::VectorXd hidden = nn::AffineForward(x, params.rep_hidden);
  for (double& v : hidden) v = nn::LeakyRelu(v, params.leaky_slope);
  return nn::AffineForward(hidden, params.rep_out);
}

double Score(const ScorerParams& params, const Eigen::VectorXd& x) {
  Eigen::VectorXd hidden =
      nn::AffineForward(Represent(params, x), params.score_hidden);
  for (double& v : hidden) v = nn::LeakyRelu(v, params.leaky_slope);
  return nn::TanhOut(nn::AffineForward(hidden, params.score_out)(0));
}

Eigen::VectorXd ScoreBatch(const ScorerParams& params,
                           const Eigen::MatrixXd& x) {
  if (x.rows() == 0) return Eigen::VectorXd(0);
  CheckDim(x.cols(), params.arch.input_dim);
  return ForwardBatch(params, x.transpose()).scores.transpose();
}

ScorerForward ForwardBatch(const ScorerParams& params,
                           const Eigen::MatrixXd& inputs_by_column) {
  CheckDim(inputs_by_column.rows(), params.arch.input_dim);
  const double slope = params.leaky_slope;
  ScorerForward f;
  f.inputs = inputs_by_column;
  f.rep_hidden_pre = nn::AffineForward(f.inputs, params.rep_hidden);
  f.rep_hidden_act = nn::LeakyRelu(f.rep_hidden_pre, slope);
  f.representation = nn::AffineForward(f.rep_hidden_act, params.rep_out);
  f.score_hidden_pre = nn::AffineForward(f.representation, params.score_hidden);
  f.score_hidden_act = nn::LeakyRelu(f.score_hidden_pre, slope);
  f.scores = nn::AffineForward(f.score_hidden_act, params.score_out)
                 .row(0)
                 .unaryExpr([](double v) { return nn::TanhOut(v); });
  return f;
}

nn::GradientTape Backward(const ScorerParams& params,
                          const ScorerForward& forward,
                          const Eigen::RowVectorXd& grad_scores,
                          const Eigen::MatrixXd& grad_representation) {
  const Eigen::Index n = forward.batch_size();
  Require(n > 0 && forward.scores.size() == n,
          "backward called without a recorded forward pass");
  Require(grad_scores.size() == 0 || grad_scores.size() == n,
          "score gradient length differs from batch size");
  Require(grad_representation.size() == 0 ||
              (grad_representation.rows() == params.arch.rep_dim &&
               grad_representation.cols() == n),
          "representation gradient shape differs from forward pass");

  nn::GradientTape tape(params.layers());
  tape.Zero();
  const double slope = params.leaky_slope;

  Eigen::MatrixXd grad_rep = Eigen::MatrixXd::Zero(params.arch.rep_dim, n);
  if (grad_scores.size() != 0) {
    // d tanh(z) / dz = 1 - tanh(z)^2
    Eigen::MatrixXd grad_logit =
        (grad_scores.array() * (1.0 - forward.scores.array().square()))
            .matrix();
    Eigen::MatrixXd grad_act = nn::AffineBackward(
        forward.score_hidden_act, params.score_out, grad_logit, tape[3]);
    Eigen::MatrixXd grad_pre =
        nn::LeakyReluBackward(forward.score_hidden_pre, grad_act, slope);
    grad_rep = nn::AffineBackward(forward.representation, params.score_hidden,
                                  grad_pre, tape[2]);
  }
  if (grad_representation.size() != 0) grad_rep += grad_representation;

  Eigen::MatrixXd grad_act = nn::AffineBackward(
      forward.rep_hidden_act, params.rep_out, grad_rep, tape[1]);
  Eigen::MatrixXd grad_pre =
      nn::LeakyReluBackward(forward.rep_hidden_pre, grad_act, slope);
  nn::AffineBackward(forward.inputs, params.rep_hidden, grad_pre, tape[0]);
  return tape;
}

}  // namespace rosas
