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

#include <cmath>
#include <fstream>
#include <sstream>

#include "rosas/error.h"

namespace rosas {
namespace {

using nlohmann::json;

[[noreturn]] void Corrupt(const std::string& what) {
  Fail(ErrorCode::kCorruptArtifact, "corrupt model artifact: " + what);
}

json LayerToJson(const nn::DenseLayer& layer) {
  json weights = json::array();
  for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      weights.push_back(layer.weights(r, c));
    }
  }
  json bias = json::array();
  for (Eigen::Index r = 0; r < layer.bias.size(); ++r) bias.push_back(layer.bias(r));
  return {{"rows", layer.weights.rows()},
          {"cols", layer.weights.cols()},
          {"weights", std::move(weights)},
          {"bias", std::move(bias)}};
}

double FiniteNumber(const json& v, const std::string& where) {
  if (!v.is_number()) Corrupt(where + " is not a finite number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) Corrupt(where + " is not finite");
  return d;
}

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) Corrupt("missing " + where + "." + key);
  return obj.at(key);
}

int IntField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number_integer()) Corrupt(where + "." + key + " is not an integer");
  return v.get<int>();
}

Eigen::VectorXd Vector(const json& arr, Eigen::Index expected, const std::string& where) {
  if (!arr.is_array()) Corrupt(where + " is not an array");
  if (static_cast<Eigen::Index>(arr.size()) != expected) {
    Corrupt(where + " has " + std::to_string(arr.size()) + " entries, expected " +
            std::to_string(expected));
  }
  Eigen::VectorXd out(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    out(i) = FiniteNumber(arr[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

nn::DenseLayer LayerFromJson(const json& j, int in, int out, const std::string& name) {
  const std::string where = "layers." + name;
  if (IntField(j, "rows", where) != out || IntField(j, "cols", where) != in) {
    Corrupt(where + " shape differs from the declared architecture");
  }
  nn::DenseLayer layer(in, out);
  const Eigen::VectorXd w = Vector(Field(j, "weights", where), Eigen::Index{in} * out,
                                   where + ".weights");
  for (int r = 0; r < out; ++r) {
    for (int c = 0; c < in; ++c) layer.weights(r, c) = w(Eigen::Index{r} * in + c);
  }
  layer.bias = Vector(Field(j, "bias", where), out, where + ".bias");
  return layer;
}

}  // namespace

std::string SerializeModel(const ModelArtifact& artifact) {
  const ScorerParams& p = artifact.params;
  Require(p.IsValid(), "refusing to serialize invalid scorer parameters");
  json layers = json::object();
  const auto ls = p.layers();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    layers[std::string(ScorerParams::kLayerNames[i])] = LayerToJson(*ls[i]);
  }
  json norm = {{"min", json::array()}, {"max", json::array()}};
  for (Eigen::Index j = 0; j < artifact.norm.min.size(); ++j) {
    norm["min"].push_back(artifact.norm.min(j));
    norm["max"].push_back(artifact.norm.max(j));
  }
  json doc = {
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"architecture",
       {{"input_dim", p.arch.input_dim},
        {"rep_dim", p.arch.rep_dim},
        {"rep_hidden", p.arch.rep_hidden},
        {"score_hidden", p.arch.score_hidden},
        {"leaky_slope", p.leaky_slope}}},
      {"layers", std::move(layers)},
      {"normalization", std::move(norm)},
      {"features", artifact.feature_names},
      {"config", artifact.config},
      {"seed", artifact.seed},
  };
  return doc.dump(1) + "\n";
}

ModelArtifact ParseModel(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    Corrupt(e.what());
  }
  if (!doc.is_object() || !doc.contains("format") || !doc.contains("version")) {
    Corrupt("missing format header");
  }
  if (doc["format"] != kModelFormat) {
    Fail(ErrorCode::kVersionMismatch, "not a rosas model (format " + doc["format"].dump() + ")");
  }
  if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kModelVersion) {
    Fail(ErrorCode::kVersionMismatch, "unsupported model version " + doc["version"].dump() +
                                          ", expected " + std::to_string(kModelVersion));
  }

  ModelArtifact out;
  const json& arch = Field(doc, "architecture", "model");
  const int d = IntField(arch, "input_dim", "architecture");
  const int h = IntField(arch, "rep_dim", "architecture");
  Architecture expected;
  try {
    expected = MakeArchitecture(d, h);
  } catch (const Error& e) {
    Corrupt(e.what());
  }
  if (IntField(arch, "rep_hidden", "architecture") != expected.rep_hidden ||
      IntField(arch, "score_hidden", "architecture") != expected.score_hidden) {
    Corrupt("hidden widths do not follow the sizing rule");
  }
  ScorerParams& p = out.params;
  p.arch = expected;
  p.leaky_slope = FiniteNumber(Field(arch, "leaky_slope", "architecture"),
                               "architecture.leaky_slope");
  const json& layers = Field(doc, "layers", "model");
  p.rep_hidden = LayerFromJson(Field(layers, "rep_hidden", "layers"), d, expected.rep_hidden,
                               "rep_hidden");
  p.rep_out = LayerFromJson(Field(layers, "rep_out", "layers"), expected.rep_hidden, h,
                            "rep_out");
  p.score_hidden = LayerFromJson(Field(layers, "score_hidden", "layers"), h,
                                 expected.score_hidden, "score_hidden");
  p.score_out = LayerFromJson(Field(layers, "score_out", "layers"), expected.score_hidden, 1,
                              "score_out");

  const json& norm = Field(doc, "normalization", "model");
  const json& mins = Field(norm, "min", "normalization");
  if (!mins.empty()) {
    out.norm.min = Vector(mins, d, "normalization.min");
    out.norm.max = Vector(Field(norm, "max", "normalization"), d, "normalization.max");
  }
  if (doc.contains("features")) {
    const json& f = doc["features"];
    if (!f.is_array() || (!f.empty() && static_cast<int>(f.size()) != d)) {
      Corrupt("feature list does not match input_dim");
    }
    for (const json& name : f) {
      if (!name.is_string()) Corrupt("feature names must be strings");
      out.feature_names.push_back(name.get<std::string>());
    }
  }
  if (doc.contains("config")) out.config = doc["config"];
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      Corrupt("seed is not an integer");
    }
    out.seed = doc["seed"].get<std::uint64_t>();
  }
  return out;
}

void SaveModel(const ModelArtifact& artifact, const std::string& path) {
  const std::string text = SerializeModel(artifact);
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, path + ": cannot open for writing");
  out << text;
  if (!out) Fail(ErrorCode::kIo, path + ": write failed");
}

ModelArtifact LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, path + ": cannot open model");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseModel(buf.str());
}

}  // namespace rosas
