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

// Seeded synthetic datasets: a ten-feature toy set with informative,
// redundant and noise features, and three 2-D cases with clustered,
// scattered and novel anomalies.

#ifndef ROSAS_SYNTHETIC_H_
#define ROSAS_SYNTHETIC_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rosas/data.h"

namespace rosas {

struct ToyOptions {
  double anomaly_fraction = 0.05;
};

// Columns 0-2 informative, 3-7 redundant (fixed random linear combinations of
// the informative block), 8-9 standard-normal noise. Normal rows come from a
// unit Gaussian at the origin; anomalies from three tighter clusters.
struct ToyDataset {
  static constexpr int kInformative = 3;
  static constexpr int kRedundant = 5;
  static constexpr int kNoise = 2;
  static constexpr int kAnomalyClusters = 3;

  Dataset data;
  Eigen::MatrixXd redundant_weights;  // kRedundant x kInformative
  Eigen::MatrixXd anomaly_centers;    // kAnomalyClusters x kInformative
  std::vector<int> cluster;           // -1 for normal rows
};

// Throws kInvalidParameter for n < 50 or a fraction outside (0, 0.5).
ToyDataset GenerateToy(int n, std::uint64_t seed, const ToyOptions& options = {});

enum class CaseKind { kClustered, kScattered, kNovel };

std::string_view CaseKindName(CaseKind kind);
CaseKind ParseCaseKind(std::string_view name);

// Normal data ~ N(0, I) in 2-D.
//   clustered: one tight anomaly blob next to the normal mass.
//   scattered: anomalies uniform on [-6, 6]^2 outside the 3-sigma circle.
//   novel:     training anomalies are a blob on the left plus scattered
//              points; the test set adds a cluster on the far right that no
//              training anomaly comes within `novel_radius` of.
struct CaseData {
  Dataset train;
  Dataset test;
  Eigen::Vector2d novel_center = Eigen::Vector2d::Zero();
  double novel_radius = 0.0;
};

struct CaseOptions {
  double anomaly_fraction = 0.05;
};

// `n` rows in each of train and test. Throws kInvalidParameter for n < 100.
CaseData GenerateCase(CaseKind kind, int n, std::uint64_t seed,
                      const CaseOptions& options = {});

}  // namespace rosas

#endif  // ROSAS_SYNTHETIC_H_
