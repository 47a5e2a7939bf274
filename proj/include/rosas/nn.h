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

// Dense layers, activations, per-layer reverse-mode gradients and an Adam
// optimizer with decoupled weight decay. Batched entry points take one sample
// per column.

#ifndef ROSAS_NN_H_
#define ROSAS_NN_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rosas::nn {

struct DenseLayer {
  DenseLayer() = default;
  // Zero-initialized layer mapping `in` inputs to `out` outputs.
  DenseLayer(Eigen::Index in, Eigen::Index out)
      : weights(Eigen::MatrixXd::Zero(out, in)),
        bias(Eigen::VectorXd::Zero(out)) {}

  Eigen::Index in_size() const { return weights.cols(); }
  Eigen::Index out_size() const { return weights.rows(); }
  bool SameShape(const DenseLayer& other) const;
  bool AllFinite() const;
  void SetZero();

  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
};

// output = weights * input + bias. Throws kContractViolation on size mismatch.
Eigen::VectorXd AffineForward(const Eigen::VectorXd& input,
                              const DenseLayer& layer);
Eigen::MatrixXd AffineForward(const Eigen::MatrixXd& inputs,
                              const DenseLayer& layer);

// Adds dLoss/dweights and dLoss/dbias for the batch to `grad` and returns
// dLoss/dinputs. `inputs` is the cached forward input, `grad_out` is
// dLoss/doutputs; both one column per sample.
Eigen::MatrixXd AffineBackward(const Eigen::MatrixXd& inputs,
                               const DenseLayer& layer,
                               const Eigen::MatrixXd& grad_out,
                               DenseLayer& grad);

inline double LeakyRelu(double x, double slope) {
  return x >= 0.0 ? x : slope * x;
}
Eigen::MatrixXd LeakyRelu(const Eigen::MatrixXd& x, double slope);
// Gradient through LeakyRelu given the pre-activation values.
Eigen::MatrixXd LeakyReluBackward(const Eigen::MatrixXd& pre_activation,
                                  const Eigen::MatrixXd& grad_out,
                                  double slope);

// Hyperbolic tangent kept strictly inside (-1, 1) under saturation.
double TanhOut(double x);

// Gradient buffers mirroring a list of layers.
class GradientTape {
 public:
  GradientTape() = default;
  explicit GradientTape(std::span<const DenseLayer* const> like);

  void Zero();
  std::size_t size() const { return grads_.size(); }
  DenseLayer& operator[](std::size_t i) { return grads_[i]; }
  const DenseLayer& operator[](std::size_t i) const { return grads_[i]; }

  // In-place scaled accumulation: this += scale * other.
  void AddScaled(const GradientTape& other, double scale);

 private:
  std::vector<DenseLayer> grads_;
};

// A trainable layer together with the name reported in diagnostics.
struct ParamSlot {
  std::string name;
  DenseLayer* layer;
};

struct AdamOptions {
  double learning_rate = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-5;
};

class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  // One update of every slot from the matching tape entry. Decoupled weight
  // decay p <- p - lr * decay * p is applied before the moment update.
  // Throws kTrainingDiverged naming the offending entry when a gradient is
  // not finite; parameters are untouched in that case.
  void Step(std::span<const ParamSlot> params, const GradientTape& grads);

  std::int64_t step_count() const { return step_; }
  const AdamOptions& options() const { return options_; }

 private:
  AdamOptions options_;
  std::int64_t step_ = 0;
  std::vector<DenseLayer> first_moment_;
  std::vector<DenseLayer> second_moment_;
};

}  // namespace rosas::nn

#endif  // ROSAS_NN_H_
