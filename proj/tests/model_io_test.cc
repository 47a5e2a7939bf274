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

#include "rosas/model_io.h"

#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include <gtest/gtest.h>

#include "test_util.h"

namespace rosas {
namespace {

using ::rosas::testing::ThrowsCode;

ModelArtifact SampleArtifact() {
  ModelArtifact a;
  a.params = BuildScorer(3, 6, 12);
  for (nn::DenseLayer* l : a.params.mutable_layers()) {
    l->bias = Eigen::VectorXd::Random(l->bias.size()) / 3.0;
  }
  a.norm.min = Eigen::Vector3d(0.0, -1.0, 0.1 + 0.2);
  a.norm.max = Eigen::Vector3d(1.0, 1.0, 7.0 / 3.0);
  a.feature_names = {"a", "b", "c"};
  a.config = {{"epochs", 5}, {"ablation", "full"}};
  a.seed = 0xfedcba9876543210ULL;
  return a;
}

nlohmann::json AsJson(const ModelArtifact& a) { return nlohmann::json::parse(SerializeModel(a)); }

TEST(ModelIoTest, RoundTripIsBitExact) {
  const ModelArtifact a = SampleArtifact();
  const ModelArtifact b = ParseModel(SerializeModel(a));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.params.layers()[i]->weights, b.params.layers()[i]->weights);
    EXPECT_EQ(a.params.layers()[i]->bias, b.params.layers()[i]->bias);
  }
  EXPECT_EQ(b.params.arch.rep_hidden, a.params.arch.rep_hidden);
  EXPECT_EQ(b.params.leaky_slope, a.params.leaky_slope);
  EXPECT_EQ(b.norm.min, a.norm.min);
  EXPECT_EQ(b.norm.max, a.norm.max);
  EXPECT_EQ(b.feature_names, a.feature_names);
  EXPECT_EQ(b.config, a.config);
  EXPECT_EQ(b.seed, a.seed);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(25, 3);
  EXPECT_EQ(ScoreBatch(a.params, x), ScoreBatch(b.params, x));
  EXPECT_EQ(SerializeModel(b), SerializeModel(a));
}

TEST(ModelIoTest, SaveAndLoadFile) {
  const auto path = std::filesystem::temp_directory_path() / "rosas_model_io_test.json";
  const ModelArtifact a = SampleArtifact();
  SaveModel(a, path.string());
  const ModelArtifact b = LoadModel(path.string());
  std::filesystem::remove(path);
  EXPECT_EQ(a.params.score_out.weights, b.params.score_out.weights);
}

TEST(ModelIoTest, MissingFileIsIoError) {
  EXPECT_TRUE(ThrowsCode([] { LoadModel("/nonexistent/model.json"); }, ErrorCode::kIo));
}

TEST(ModelIoTest, TruncatedTextIsCorrupt) {
  const std::string text = SerializeModel(SampleArtifact());
  for (std::size_t cut : {std::size_t{0}, std::size_t{10}, text.size() / 2, text.size() - 2}) {
    EXPECT_TRUE(ThrowsCode([&] { ParseModel(text.substr(0, cut)); }, ErrorCode::kCorruptArtifact))
        << cut;
  }
}

TEST(ModelIoTest, NonFiniteWeightIsRejected) {
  ModelArtifact a = SampleArtifact();
  a.params.rep_out.weights(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(ThrowsCode([&] { SerializeModel(a); }, ErrorCode::kContractViolation));
  // JSON has no NaN literal; nlohmann writes null in its place.
  nlohmann::json j = AsJson(SampleArtifact());
  j["layers"]["rep_out"]["weights"][3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(ThrowsCode([&] { ParseModel(j.dump()); }, ErrorCode::kCorruptArtifact));
  j = AsJson(SampleArtifact());
  j["normalization"]["max"][0] = 1e308;
  std::string huge = j.dump();
  huge.replace(huge.find("1e+308"), 6, "1e999");
  EXPECT_TRUE(ThrowsCode([&] { ParseModel(huge); }, ErrorCode::kCorruptArtifact));
  j = AsJson(SampleArtifact());
  j["layers"]["score_out"]["bias"][0] = "1.0";
  EXPECT_TRUE(ThrowsCode([&] { ParseModel(j.dump()); }, ErrorCode::kCorruptArtifact));
}

TEST(ModelIoTest, ShapeMismatchIsRejected) {
  nlohmann::json j = AsJson(SampleArtifact());
  j["layers"]["rep_out"]["weights"].erase(0);
  EXPECT_TRUE(ThrowsCode([&] { ParseModel(j.dump()); }, ErrorCode::kCorruptArtifact));
  j = AsJson(SampleArtifact());
  j["architecture"]["rep_hidden"] = 5;
  EXPECT_TRUE(ThrowsCode([&] { ParseModel(j.dump()); }, ErrorCode::kCorruptArtifact));
  j = AsJson(SampleArtifact());
  j["normalization"]["min"].erase(0);
  EXPECT_TRUE(ThrowsCode([&] { ParseModel(j.dump()); }, ErrorCode::kCorruptArtifact));
  j = AsJson(SampleArtifact());
  j["layers"].erase("score_hidden");
  EXPECT_TRUE(ThrowsCode([&] { ParseModel(j.dump()); }, ErrorCode::kCorruptArtifact));
}

TEST(ModelIoTest, VersionIsCheckedBeforeWeights) {
  nlohmann::json j = AsJson(SampleArtifact());
  j["version"] = kModelVersion + 1;
  j["layers"] = "not even an object";
  EXPECT_TRUE(ThrowsCode([&] { ParseModel(j.dump()); }, ErrorCode::kVersionMismatch));
  j["version"] = kModelVersion;
  j["format"] = "other-model";
  EXPECT_TRUE(ThrowsCode([&] { ParseModel(j.dump()); }, ErrorCode::kVersionMismatch));
}

}  // namespace
}  // namespace rosas
