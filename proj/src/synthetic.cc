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

#include "rosas/synthetic.h"

#include <cmath>
#include <random>
#include <string>

#include "rosas/error.h"
#include "rosas/random.h"

namespace rosas {
namespace {

// Anomaly clusters of the toy set sit on three faces of the cube around the
// normal mass; spread 0.6 against the unit normal spread.
constexpr double kToyCenterOffset = 2.0;
constexpr double kToyClusterSigma = 0.6;

constexpr double kCaseNormalSigma = 1.0;
constexpr double kCaseBlobSigma = 0.35;
constexpr double kCaseBox = 6.0;

int AnomalyCount(int n, double fraction) {
  return std::max(1, static_cast<int>(std::lround(fraction * n)));
}

void CheckFraction(double f) {
  if (!(f > 0.0 && f < 0.5)) {
    Fail(ErrorCode::kInvalidParameter, "anomaly fraction must lie in (0, 0.5)");
  }
}

Eigen::Vector2d Gaussian2(const Eigen::Vector2d& center, double sigma, Rng& rng) {
  std::normal_distribution<double> g(0.0, sigma);
  const double a = g(rng);
  const double b = g(rng);
  return center + Eigen::Vector2d(a, b);
}

// Uniform on the box, outside the 3-sigma circle of the normal component and
// outside `exclude_radius` of `exclude_center`.
Eigen::Vector2d Scattered(Rng& rng, const Eigen::Vector2d& exclude_center,
                          double exclude_radius) {
  std::uniform_real_distribution<double> u(-kCaseBox, kCaseBox);
  while (true) {
    const double a = u(rng);
    const double b = u(rng);
    const Eigen::Vector2d p(a, b);
    if (p.norm() <= 3.0 * kCaseNormalSigma) continue;
    if ((p - exclude_center).norm() <= exclude_radius) continue;
    return p;
  }
}

Dataset Case2D(const std::vector<Eigen::Vector2d>& points, const std::vector<int>& labels) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) x.row(i) = points[i].transpose();
  return MakeDataset(std::move(x), labels, {"x0", "x1"});
}

}  // namespace

ToyDataset GenerateToy(int n, std::uint64_t seed, const ToyOptions& options) {
  if (n < 50) Fail(ErrorCode::kInvalidParameter, "toy generator needs n >= 50");
  CheckFraction(options.anomaly_fraction);
  Rng rng = Substream(seed, "toy");
  constexpr int kI = ToyDataset::kInformative;
  constexpr int kR = ToyDataset::kRedundant;
  constexpr int kN = ToyDataset::kNoise;

  ToyDataset toy;
  toy.anomaly_centers.resize(ToyDataset::kAnomalyClusters, kI);
  toy.anomaly_centers << kToyCenterOffset, kToyCenterOffset, 0.0,  //
      kToyCenterOffset, 0.0, kToyCenterOffset,                     //
      0.0, kToyCenterOffset, kToyCenterOffset;
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  toy.redundant_weights.resize(kR, kI);
  for (int r = 0; r < kR; ++r) {
    for (int c = 0; c < kI; ++c) toy.redundant_weights(r, c) = coef(rng);
  }

  const int n_anomalies = AnomalyCount(n, options.anomaly_fraction);
  std::normal_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd x(n, kI + kR + kN);
  std::vector<int> labels(n, 0);
  toy.cluster.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d informative;
    if (i < n_anomalies) {
      const int c = i % ToyDataset::kAnomalyClusters;
      toy.cluster[i] = c;
      labels[i] = 1;
      for (int k = 0; k < kI; ++k) {
        informative(k) = toy.anomaly_centers(c, k) + kToyClusterSigma * unit(rng);
      }
    } else {
      for (int k = 0; k < kI; ++k) informative(k) = unit(rng);
    }
    x.row(i).head(kI) = informative.transpose();
    x.row(i).segment(kI, kR) = (toy.redundant_weights * informative).transpose();
    for (int k = 0; k < kN; ++k) x(i, kI + kR + k) = unit(rng);
  }

  // Shuffle rows so anomalies are not clustered at the top of the file.
  std::vector<Eigen::Index> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }
  Eigen::MatrixXd shuffled(n, x.cols());
  std::vector<int> shuffled_labels(n);
  std::vector<int> shuffled_cluster(n);
  for (int i = 0; i < n; ++i) {
    shuffled.row(i) = x.row(order[i]);
    shuffled_labels[i] = labels[order[i]];
    shuffled_cluster[i] = toy.cluster[order[i]];
  }
  toy.cluster = std::move(shuffled_cluster);

  std::vector<std::string> names;
  for (int k = 0; k < kI; ++k) names.push_back("informative_" + std::to_string(k));
  for (int k = 0; k < kR; ++k) names.push_back("redundant_" + std::to_string(k));
  for (int k = 0; k < kN; ++k) names.push_back("noise_" + std::to_string(k));
  toy.data = MakeDataset(std::move(shuffled), std::move(shuffled_labels), std::move(names));
  return toy;
}

std::string_view CaseKindName(CaseKind kind) {
  switch (kind) {
    case CaseKind::kClustered:
      return "clustered";
    case CaseKind::kScattered:
      return "scattered";
    case CaseKind::kNovel:
      return "novel";
  }
  return "unknown";
}

CaseKind ParseCaseKind(std::string_view name) {
  for (CaseKind k : {CaseKind::kClustered, CaseKind::kScattered, CaseKind::kNovel}) {
    if (CaseKindName(k) == name) return k;
  }
  Fail(ErrorCode::kInvalidParameter, "unknown case kind '" + std::string(name) + "'");
}

CaseData GenerateCase(CaseKind kind, int n, std::uint64_t seed, const CaseOptions& options) {
  if (n < 100) Fail(ErrorCode::kInvalidParameter, "case generator needs n >= 100");
  CheckFraction(options.anomaly_fraction);
  Rng rng = Substream(seed, std::string("case/") + std::string(CaseKindName(kind)));
  const Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  const Eigen::Vector2d clustered_center(3.0, 3.0);
  const Eigen::Vector2d known_center(-3.5, 2.5);

  CaseData out;
  if (kind == CaseKind::kNovel) {
    out.novel_center = Eigen::Vector2d(5.0, -1.0);
    out.novel_radius = 2.0;
  }
  const int n_anomalies = AnomalyCount(n, options.anomaly_fraction);

  auto anomaly = [&](int i, bool test) -> Eigen::Vector2d {
    switch (kind) {
      case CaseKind::kClustered:
        return Gaussian2(clustered_center, kCaseBlobSigma, rng);
      case CaseKind::kScattered:
        return Scattered(rng, origin, 0.0);
      case CaseKind::kNovel:
        // Test anomalies: one third from the held-out cluster.
        if (test && i % 3 == 2) return Gaussian2(out.novel_center, kCaseBlobSigma, rng);
        if (i % 2 == 0) return Gaussian2(known_center, kCaseBlobSigma, rng);
        return Scattered(rng, out.novel_center, out.novel_radius);
    }
    return origin;
  };

  for (bool test : {false, true}) {
    std::vector<Eigen::Vector2d> points;
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) {
      const bool is_anomaly = i < n_anomalies;
      points.push_back(is_anomaly ? anomaly(i, test)
                                  : Gaussian2(origin, kCaseNormalSigma, rng));
      labels.push_back(is_anomaly ? 1 : 0);
    }
    for (int i = n - 1; i > 0; --i) {
      std::uniform_int_distribution<int> pick(0, i);
      const int j = pick(rng);
      std::swap(points[i], points[j]);
      std::swap(labels[i], labels[j]);
    }
    (test ? out.test : out.train) = Case2D(points, labels);
  }
  return out;
}

}  // namespace rosas
