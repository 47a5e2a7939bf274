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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rosas/eval.h"
#include "test_util.h"

namespace rosas {
namespace {

using ::rosas::testing::ThrowsCode;

double Correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd ca = a.array() - a.mean();
  const Eigen::ArrayXd cb = b.array() - b.mean();
  return (ca * cb).sum() / std::sqrt((ca * ca).sum() * (cb * cb).sum());
}

Eigen::VectorXd LabelVector(const Dataset& d) {
  Eigen::VectorXd y(d.rows());
  for (Eigen::Index i = 0; i < d.rows(); ++i) y(i) = d.labels[i];
  return y;
}

TEST(ToyTest, ShapeNamesAndFraction) {
  const ToyDataset toy = GenerateToy(2000, 1);
  EXPECT_EQ(toy.data.rows(), 2000);
  EXPECT_EQ(toy.data.dim(), 10);
  EXPECT_EQ(toy.data.feature_names.front(), "informative_0");
  EXPECT_EQ(toy.data.feature_names.back(), "noise_1");
  const long anomalies = std::count(toy.data.labels.begin(), toy.data.labels.end(), 1);
  EXPECT_EQ(anomalies, 100);
}

TEST(ToyTest, RedundantFeaturesAreExactCombinations) {
  const ToyDataset toy = GenerateToy(500, 2);
  const Eigen::MatrixXd informative = toy.data.x.leftCols(3);
  const Eigen::MatrixXd expected = informative * toy.redundant_weights.transpose();
  EXPECT_TRUE(toy.data.x.middleCols(3, 5).isApprox(expected, 1e-15));
}

TEST(ToyTest, NoiseFeaturesAreUncorrelatedWithLabels) {
  const ToyDataset toy = GenerateToy(10000, 3);
  const Eigen::VectorXd y = LabelVector(toy.data);
  for (int j = 8; j < 10; ++j) {
    EXPECT_LT(std::abs(Correlation(toy.data.x.col(j), y)), 0.1) << j;
  }
}

TEST(ToyTest, AnomalyClustersAreRecoverableByNearestCenter) {
  const ToyDataset toy = GenerateToy(6000, 4);
  std::vector<int> seen(3, 0);
  int agree = 0, anomalies = 0;
  for (Eigen::Index i = 0; i < toy.data.rows(); ++i) {
    if (toy.data.labels[i] != 1) {
      EXPECT_EQ(toy.cluster[i], -1);
      continue;
    }
    ++anomalies;
    Eigen::Index nearest;
    (toy.anomaly_centers.rowwise() - toy.data.x.row(i).head(3)).rowwise().squaredNorm().minCoeff(
        &nearest);
    agree += nearest == toy.cluster[i];
    ++seen[toy.cluster[i]];
  }
  for (int c : seen) EXPECT_GT(c, 0);
  EXPECT_GE(static_cast<double>(agree) / anomalies, 0.95);
}

TEST(ToyTest, LinearProbeOnInformativeFeatures) {
  // Fisher discriminant on the informative block, fitted on one sample and
  // scored on another.
  const ToyDataset fit = GenerateToy(10000, 5), held = GenerateToy(10000, 6);
  Eigen::Vector3d mu[2] = {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
  int count[2] = {0, 0};
  for (Eigen::Index i = 0; i < fit.data.rows(); ++i) {
    mu[fit.data.labels[i]] += fit.data.x.row(i).head(3).transpose();
    ++count[fit.data.labels[i]];
  }
  mu[0] /= count[0];
  mu[1] /= count[1];
  Eigen::Matrix3d within = Eigen::Matrix3d::Zero();
  for (Eigen::Index i = 0; i < fit.data.rows(); ++i) {
    const Eigen::Vector3d c = fit.data.x.row(i).head(3).transpose() - mu[fit.data.labels[i]];
    within += c * c.transpose();
  }
  const Eigen::Vector3d w = within.ldlt().solve(mu[1] - mu[0]);
  const Eigen::VectorXd scores = held.data.x.leftCols(3) * w;
  const std::vector<double> s(scores.data(), scores.data() + scores.size());
  EXPECT_GE(AucRoc(s, held.data.labels), 0.95);
}

TEST(ToyTest, SeedDeterminismAndErrors) {
  EXPECT_EQ(GenerateToy(300, 7).data.x, GenerateToy(300, 7).data.x);
  EXPECT_NE(GenerateToy(300, 7).data.x, GenerateToy(300, 8).data.x);
  EXPECT_TRUE(ThrowsCode([] { GenerateToy(49, 0); }, ErrorCode::kInvalidParameter));
  EXPECT_TRUE(ThrowsCode([] { GenerateToy(100, 0, {0.6}); }, ErrorCode::kInvalidParameter));
}

TEST(CaseTest, KindNamesRoundTrip) {
  for (CaseKind k : {CaseKind::kClustered, CaseKind::kScattered, CaseKind::kNovel}) {
    EXPECT_EQ(ParseCaseKind(CaseKindName(k)), k);
  }
  EXPECT_TRUE(ThrowsCode([] { ParseCaseKind("ring"); }, ErrorCode::kInvalidParameter));
  EXPECT_TRUE(ThrowsCode([] { GenerateCase(CaseKind::kNovel, 99, 0); },
                         ErrorCode::kInvalidParameter));
}

TEST(CaseTest, ClusteredTrainAndTestShareDistribution) {
  const CaseData c = GenerateCase(CaseKind::kClustered, 20000, 1);
  EXPECT_EQ(c.train.rows(), 20000);
  EXPECT_EQ(c.test.rows(), 20000);
  EXPECT_EQ(c.train.dim(), 2);
  const Eigen::RowVectorXd diff = c.train.x.colwise().mean() - c.test.x.colwise().mean();
  // Per-coordinate standard deviation stays below about 1.2 for this mixture.
  const double se = 1.2 * std::sqrt(2.0 / 20000);
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 4 * se);
}

TEST(CaseTest, ScatteredAnomaliesLieOutsideThreeSigma) {
  const CaseData c = GenerateCase(CaseKind::kScattered, 4000, 2);
  for (const Dataset* d : {&c.train, &c.test}) {
    int anomalies = 0;
    for (Eigen::Index i = 0; i < d->rows(); ++i) {
      if (d->labels[i] != 1) continue;
      ++anomalies;
      EXPECT_GT(d->x.row(i).norm(), 3.0);
    }
    EXPECT_GT(anomalies, 0);
  }
}

TEST(CaseTest, NovelClusterIsAbsentFromTraining) {
  const CaseData c = GenerateCase(CaseKind::kNovel, 4000, 3);
  ASSERT_GT(c.novel_radius, 0.0);
  auto near_novel = [&](const Dataset& d) {
    int n = 0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      const bool close = (d.x.row(i).transpose() - c.novel_center).norm() < c.novel_radius;
      n += d.labels[i] == 1 && close;
    }
    return n;
  };
  EXPECT_EQ(near_novel(c.train), 0);
  EXPECT_GT(near_novel(c.test), 0);
}

}  // namespace
}  // namespace rosas
