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

#include "rosas/nn.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rosas/error.h"

namespace rosas::nn {
namespace {

std::string Shape(Eigen::Index rows, Eigen::Index cols) {
  std::ostringstream out;
  out << rows << "x" << cols;
  return out.str();
}

void CheckInput(Eigen::Index input_rows, const DenseLayer& layer) {
  if (input_rows != layer.in_size()) {
    Fail(ErrorCode::kContractViolation,
         "dense layer expects " + std::to_string(layer.in_size()) +
             " inputs, got " + std::to_string(input_rows));
  }
}

}  // namespace

bool DenseLayer::SameShape(const DenseLayer& other) const {
  return weights.rows() == other.weights.rows() &&
         weights.cols() == other.weights.cols() &&
         bias.size() == other.bias.size();
}

bool DenseLayer::AllFinite() const {
  return weights.allFinite() && bias.allFinite();
}

void DenseLayer::SetZero() {
  weights.setZero();
  bias.setZero();
}

Eigen::VectorXd AffineForward(const Eigen::VectorXd& input,
                              const DenseLayer& layer) {
  CheckInput(input.size(), layer);
  return layer.weights * input + layer.bias;
}

Eigen::MatrixXd AffineForward(const Eigen::MatrixXd& inputs,
                              const DenseLayer& layer) {
  CheckInput(inputs.rows(), layer);
  Eigen::MatrixXd out = layer.weights * inputs;
  out.colwise() += layer.bias;
  return out;
}

Eigen::MatrixXd AffineBackward(const Eigen::MatrixXd& inputs,
                               const DenseLayer& layer,
                               const Eigen::MatrixXd& grad_out,
                               DenseLayer& grad) {
  CheckInput(inputs.rows(), layer);
  if (grad_out.rows() != layer.out_size() ||
      grad_out.cols() != inputs.cols()) {
    Fail(ErrorCode::kContractViolation,
         "upstream gradient has shape " +
             Shape(grad_out.rows(), grad_out.cols()) + ", expected " +
             Shape(layer.out_size(), inputs.cols()));
  }
  Require(grad.SameShape(layer), "gradient buffer shape differs from layer");
  grad.weights.noalias() += grad_out * inputs.transpose();
  grad.bias.noalias() += grad_out.rowwise().sum();
  return layer.weights.transpose() * grad_out;
}

Eigen::MatrixXd LeakyRelu(const Eigen::MatrixXd& x, double slope) {
  return x.unaryExpr([slope](double v) { return LeakyRelu(v, slope); });
}

Eigen::MatrixXd LeakyReluBackward(const Eigen::MatrixXd& pre_activation,
                                  const Eigen::MatrixXd& grad_out,
                                  double slope) {
  Require(pre_activation.rows() == grad_out.rows() &&
              pre_activation.cols() == grad_out.cols(),
          "LeakyRelu gradient shape mismatch");
  return grad_out.binaryExpr(pre_activation, [slope](double g, double z) {
    return z >= 0.0 ? g : slope * g;
  });
}

double TanhOut(double x) {
  static const double kBound = std::nextafter(1.0, 0.0);
  return std::clamp(std::tanh(x), -kBound, kBound);
}

GradientTape::GradientTape(std::span<const DenseLayer* const> like) {
  grads_.reserve(like.size());
  for (const DenseLayer* layer : like) {
    grads_.emplace_back(layer->in_size(), layer->out_size());
  }
}

void GradientTape::Zero() {
  for (DenseLayer& g : grads_) g.SetZero();
}

void GradientTape::AddScaled(const GradientTape& other, double scale) {
  Require(other.size() == size(), "gradient tapes differ in length");
  for (std::size_t i = 0; i < grads_.size(); ++i) {
    Require(grads_[i].SameShape(other[i]), "gradient tapes differ in shape");
    grads_[i].weights += scale * other[i].weights;
    grads_[i].bias += scale * other[i].bias;
  }
}

void Adam::Step(std::span<const ParamSlot> params, const GradientTape& grads) {
  Require(params.size() == grads.size(),
          "optimizer received " + std::to_string(grads.size()) +
              " gradients for " + std::to_string(params.size()) +
              " parameters");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const DenseLayer& g = grads[i];
    Require(params[i].layer->SameShape(g),
            "gradient shape differs from parameter " + params[i].name);
    for (Eigen::Index r = 0; r < g.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.weights.cols(); ++c) {
        if (!std::isfinite(g.weights(r, c))) {
          Fail(ErrorCode::kTrainingDiverged,
               "non-finite gradient at " + params[i].name + ".weights[" +
                   std::to_string(r) + "," + std::to_string(c) + "]");
        }
      }
    }
    for (Eigen::Index r = 0; r < g.bias.size(); ++r) {
      if (!std::isfinite(g.bias(r))) {
        Fail(ErrorCode::kTrainingDiverged, "non-finite gradient at " +
                                               params[i].name + ".bias[" +
                                               std::to_string(r) + "]");
      }
    }
  }

  if (first_moment_.empty()) {
    for (const ParamSlot& slot : params) {
      first_moment_.emplace_back(slot.layer->in_size(),
                                 slot.layer->out_size());
      second_moment_.emplace_back(slot.layer->in_size(),
                                  slot.layer->out_size());
    }
  }
  Require(first_moment_.size() == params.size(),
          "optimizer state was built for a different parameter list");

  ++step_;
  const double lr = options_.learning_rate;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double eps = options_.epsilon;
  const double shrink = 1.0 - lr * options_.weight_decay;

  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    if (options_.weight_decay != 0.0) p *= shrink;
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseAbs2();
    p.array() -= lr * (m.array() / correction1) /
                 ((v.array() / correction2).sqrt() + eps);
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    DenseLayer& p = *params[i].layer;
    Require(p.SameShape(first_moment_[i]),
            "optimizer state shape differs from parameter " + params[i].name);
    update(p.weights, grads[i].weights, first_moment_[i].weights,
           second_moment_[i].weights);
    update(p.bias, grads[i].bias, first_moment_[i].bias,
           second_moment_[i].bias);
  }
}

}  // namespace rosas::nn
