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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace rosas::nn {
namespace {

using ::rosas::testing::ErrorMessage;
using ::rosas::testing::ThrowsCode;

DenseLayer MakeLayer(const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
  DenseLayer l(w.cols(), w.rows());
  l.weights = w;
  l.bias = b;
  return l;
}

TEST(DenseLayerTest, ShapesAndZeroInit) {
  DenseLayer l(3, 2);
  EXPECT_EQ(l.in_size(), 3);
  EXPECT_EQ(l.out_size(), 2);
  EXPECT_TRUE(l.weights.isZero());
  EXPECT_TRUE(l.bias.isZero());
  EXPECT_TRUE(l.SameShape(DenseLayer(3, 2)));
  EXPECT_FALSE(l.SameShape(DenseLayer(2, 3)));
}

TEST(DenseLayerTest, AllFiniteDetectsNan) {
  DenseLayer l(2, 2);
  EXPECT_TRUE(l.AllFinite());
  l.bias(1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(l.AllFinite());
  l.SetZero();
  EXPECT_TRUE(l.AllFinite());
}

TEST(AffineTest, VectorMatchesHandComputation) {
  Eigen::MatrixXd w(2, 3);
  w << 1, 2, 3, -1, 0, 0.5;
  const DenseLayer l = MakeLayer(w, Eigen::Vector2d(0.1, -0.2));
  const Eigen::VectorXd y = AffineForward(Eigen::VectorXd(Eigen::Vector3d(1, 1, 2)), l);
  EXPECT_DOUBLE_EQ(y(0), 1 + 2 + 6 + 0.1);
  EXPECT_DOUBLE_EQ(y(1), -1 + 1 - 0.2);
}

TEST(AffineTest, BatchMatchesColumnwiseVector) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Random(4, 3);
  const DenseLayer l = MakeLayer(w, Eigen::VectorXd::Random(4));
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 5);
  const Eigen::MatrixXd y = AffineForward(x, l);
  for (int c = 0; c < 5; ++c) {
    const Eigen::VectorXd col = x.col(c);
    EXPECT_TRUE(y.col(c).isApprox(AffineForward(col, l), 1e-14));
  }
}

TEST(AffineTest, BackwardAccumulatesAndReturnsInputGradient) {
  Eigen::MatrixXd w(1, 2);
  w << 2, -3;
  const DenseLayer l = MakeLayer(w, Eigen::VectorXd::Zero(1));
  Eigen::MatrixXd x(2, 2);
  x << 1, 4, 2, 5;
  Eigen::MatrixXd g(1, 2);
  g << 1, 0.5;
  DenseLayer grad(2, 1);
  grad.bias(0) = 10.0;
  const Eigen::MatrixXd gin = AffineBackward(x, l, g, grad);
  EXPECT_DOUBLE_EQ(grad.weights(0, 0), 1 * 1 + 0.5 * 4);
  EXPECT_DOUBLE_EQ(grad.weights(0, 1), 1 * 2 + 0.5 * 5);
  EXPECT_DOUBLE_EQ(grad.bias(0), 10.0 + 1.5);
  EXPECT_DOUBLE_EQ(gin(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(gin(1, 1), -1.5);
}

TEST(ActivationTest, LeakyReluScalarAndMatrix) {
  EXPECT_DOUBLE_EQ(LeakyRelu(2.0, 0.01), 2.0);
  EXPECT_DOUBLE_EQ(LeakyRelu(-2.0, 0.01), -0.02);
  EXPECT_DOUBLE_EQ(LeakyRelu(0.0, 0.01), 0.0);
  Eigen::MatrixXd m(1, 3);
  m << -1, 0, 3;
  const Eigen::MatrixXd a = LeakyRelu(m, 0.1);
  EXPECT_DOUBLE_EQ(a(0, 0), -0.1);
  EXPECT_DOUBLE_EQ(a(0, 2), 3.0);
  const Eigen::MatrixXd g = LeakyReluBackward(m, Eigen::MatrixXd::Ones(1, 3), 0.1);
  EXPECT_DOUBLE_EQ(g(0, 0), 0.1);
  EXPECT_DOUBLE_EQ(g(0, 2), 1.0);
}

TEST(ActivationTest, TanhOutIsBoundedAndOdd) {
  EXPECT_DOUBLE_EQ(TanhOut(0.0), 0.0);
  EXPECT_DOUBLE_EQ(TanhOut(-0.3), -TanhOut(0.3));
  EXPECT_LE(TanhOut(50.0), 1.0);
  EXPECT_GE(TanhOut(-50.0), -1.0);
}

TEST(GradientTapeTest, ZeroAndAddScaled) {
  DenseLayer a(2, 1), b(1, 3);
  const std::vector<const DenseLayer*> like = {&a, &b};
  GradientTape t(like), u(like);
  ASSERT_EQ(t.size(), 2u);
  t[0].weights.setConstant(1.0);
  u[0].weights.setConstant(2.0);
  u[1].bias.setConstant(-1.0);
  t.AddScaled(u, 0.5);
  EXPECT_DOUBLE_EQ(t[0].weights(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(t[1].bias(2), -0.5);
  t.Zero();
  EXPECT_TRUE(t[0].weights.isZero());
}

class AdamTest : public ::testing::Test {
 protected:
  void SetUp() override {
    layer_ = DenseLayer(2, 1);
    layer_.weights << 0.5, -1.0;
    layer_.bias << 0.25;
    const std::vector<const DenseLayer*> like = {&layer_};
    grads_ = GradientTape(like);
    slots_ = {{"w", &layer_}};
  }
  DenseLayer layer_;
  GradientTape grads_;
  std::vector<ParamSlot> slots_;
};

TEST_F(AdamTest, FirstStepMatchesClosedForm) {
  AdamOptions o;
  Adam adam(o);
  grads_[0].weights << 0.2, -3.0;
  grads_[0].bias << 0.0;
  const DenseLayer before = layer_;
  adam.Step(slots_, grads_);
  EXPECT_EQ(adam.step_count(), 1);
  // Bias-corrected moments equal g and g^2 after one step.
  for (int j = 0; j < 2; ++j) {
    const double g = grads_[0].weights(0, j);
    const double decayed = before.weights(0, j) * (1.0 - o.learning_rate * o.weight_decay);
    const double want = decayed - o.learning_rate * g / (std::abs(g) + o.epsilon);
    EXPECT_NEAR(layer_.weights(0, j), want, 1e-15);
  }
  EXPECT_NEAR(layer_.bias(0), 0.25 * (1.0 - o.learning_rate * o.weight_decay), 1e-15);
}

TEST_F(AdamTest, SecondStepMatchesClosedForm) {
  AdamOptions o;
  o.weight_decay = 0.0;
  Adam adam(o);
  grads_[0].weights << 1.0, 0.0;
  adam.Step(slots_, grads_);
  const double after_first = layer_.weights(0, 0);
  grads_[0].weights << -0.5, 0.0;
  adam.Step(slots_, grads_);
  const double m = o.beta1 * (1 - o.beta1) * 1.0 + (1 - o.beta1) * -0.5;
  const double v = o.beta2 * (1 - o.beta2) * 1.0 + (1 - o.beta2) * 0.25;
  const double mhat = m / (1 - o.beta1 * o.beta1);
  const double vhat = v / (1 - o.beta2 * o.beta2);
  EXPECT_NEAR(layer_.weights(0, 0),
              after_first - o.learning_rate * mhat / (std::sqrt(vhat) + o.epsilon), 1e-15);
}

TEST_F(AdamTest, NonFiniteGradientNamesParameter) {
  Adam adam;
  grads_[0].weights(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(ThrowsCode([&] { adam.Step(slots_, grads_); }, ErrorCode::kTrainingDiverged));
  EXPECT_NE(ErrorMessage([&] { adam.Step(slots_, grads_); }).find("w"), std::string::npos);
  EXPECT_DOUBLE_EQ(layer_.weights(0, 0), 0.5);
}

}  // namespace
}  // namespace rosas::nn
