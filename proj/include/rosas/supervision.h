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

// Mass interpolation: augmented samples are convex combinations of k source
// samples, carrying the same combination of the sources' +1/-1 labels as a
// continuous target in [-1, 1].

#ifndef ROSAS_SUPERVISION_H_
#define ROSAS_SUPERVISION_H_

#include <vector>

#include <Eigen/Dense>

#include "rosas/random.h"

namespace rosas {

inline constexpr double kLabeledAnomaly = 1.0;
inline constexpr double kUnlabeled = -1.0;

// Source batch for interpolation: one sample per row, labels in {+1, -1}.
struct LabeledBatch {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;

  Eigen::Index size() const { return x.rows(); }
};

struct AugmentedSample {
  Eigen::VectorXd x_tilde;
  double y_tilde = 0.0;
  std::vector<int> sources;  // row indices into the source batch
  std::vector<double> lambdas;
};

// k = 2: lambda_1 ~ Beta(alpha, alpha), lambda_2 = 1 - lambda_1.
// k > 2: symmetric Dirichlet(alpha). Both are sampled exactly from Gamma
// draws. Throws kInvalidParameter for alpha <= 0 or k < 2.
std::vector<double> SampleWeights(int k, double alpha, Rng& rng);

// x_tilde = sum lambda_i x_i, y_tilde = sum lambda_i y_i.
AugmentedSample Interpolate(const LabeledBatch& batch,
                            std::vector<int> sources,
                            std::vector<double> lambdas);

// Builds `count` augmented samples, each from k distinct rows drawn uniformly
// without replacement. Throws kInsufficientBatch when batch.size() < k.
std::vector<AugmentedSample> AugmentBatch(const LabeledBatch& batch, int k,
                                          double alpha, int count, Rng& rng);

}  // namespace rosas

#endif  // ROSAS_SUPERVISION_H_
