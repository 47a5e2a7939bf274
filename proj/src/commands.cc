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

#include "rosas/commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rosas/error.h"
#include "rosas/model_io.h"
#include "rosas/synthetic.h"

namespace rosas {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteText(const std::string& path, const std::string& text) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) Fail(ErrorCode::kIo, parent.string() + ": cannot create directory: " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, path + ": cannot open for writing");
  out << text;
  if (!out) Fail(ErrorCode::kIo, path + ": write failed");
}

std::string EnsureDir(const std::string& dir) {
  const std::string d = dir.empty() ? DefaultOutputDir() : dir;
  std::error_code ec;
  std::filesystem::create_directories(d, ec);
  if (ec) Fail(ErrorCode::kIo, d + ": cannot create directory: " + ec.message());
  return d;
}

std::string OrDefault(const std::string& path, const std::string& file) {
  if (!path.empty()) return path;
  return (std::filesystem::path(EnsureDir("")) / file).string();
}

json MetricsJson(const MetricsReport& m) {
  return {{"auc_roc", m.auc_roc}, {"auc_pr", m.auc_pr}, {"n_pos", m.n_pos}, {"n_neg", m.n_neg}};
}

Eigen::MatrixXd ModelInputs(const ModelArtifact& model, const Dataset& data) {
  if (data.dim() != model.params.arch.input_dim) {
    Fail(ErrorCode::kContractViolation,
         "model expects " + std::to_string(model.params.arch.input_dim) +
             " features, data has " + std::to_string(data.dim()));
  }
  return model.norm.empty() ? data.x : model.norm.Apply(data.x);
}

}  // namespace

std::string DefaultOutputDir() {
  const char* env = std::getenv("ROSAS_OUTPUT_DIR");
  return env != nullptr && *env != '\0' ? std::string(env) : std::string(".");
}

std::string HashHex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string FileFingerprint(const std::string& path) { return HashHex(Fnv1a(ReadFile(path))); }

json RunManifest::ToJson() const {
  return {{"command", command},
          {"config_hash", config_hash},
          {"dataset_fingerprint", dataset_fingerprint},
          {"seed", seed},
          {"metrics", metrics},
          {"outputs", outputs},
          {"wall_clock_seconds", wall_clock_seconds}};
}

void WriteManifest(const RunManifest& manifest, const std::string& path) {
  WriteText(path, manifest.ToJson().dump(1) + "\n");
}

TrainCommandOutput RunTrainCommand(const TrainCommandOptions& options) {
  const auto start = Clock::now();
  // Validate everything cheap before reading data.
  options.pipeline.train.Validate();
  if (options.pipeline.labeled_anomalies < 1) {
    Fail(ErrorCode::kUnusableDataset,
         "training needs at least one labeled anomaly (got budget " +
             std::to_string(options.pipeline.labeled_anomalies) + ")");
  }
  const Dataset data = LoadCsv(options.data_path, {options.label_column, true});

  ProgressCallback progress;
  if (!options.quiet) {
    progress = [](const EpochRecord& r) {
      json rec = {{"epoch", r.epoch},
                  {"mean_loss", r.mean_loss},
                  {"mean_reg", r.mean_reg},
                  {"mean_weight", r.mean_weight},
                  {"val_auc_pr", std::isnan(r.val_auc_pr) ? json(nullptr) : json(r.val_auc_pr)},
                  {"seconds", r.seconds}};
      std::cerr << rec.dump() << "\n";
    };
  }
  const PreparedData prepared = PrepareData(data, options.pipeline, true);
  const TrainResult trained = Train(prepared.normalized, options.pipeline.train, progress);

  const std::string dir = EnsureDir(options.out_dir);
  const std::filesystem::path base(dir);
  TrainCommandOutput out;
  out.model_path = (base / "model.json").string();
  out.history_path = (base / "history.json").string();
  out.test_path = (base / "test.csv").string();
  out.valid_path = (base / "valid.csv").string();
  out.manifest_path = (base / "manifest.json").string();

  ModelArtifact artifact;
  artifact.params = trained.params;
  artifact.norm = prepared.normalized.norm;
  artifact.feature_names = data.feature_names;
  artifact.config = ToJson(options.pipeline);
  artifact.seed = options.pipeline.train.seed;
  SaveModel(artifact, out.model_path);
  WriteText(out.history_path, HistoryToJson(trained.history).dump(1) + "\n");
  WriteCsv(prepared.raw.Subset(prepared.raw.RowsWithRole(Role::kTest)), out.test_path);
  WriteCsv(prepared.raw.Subset(prepared.raw.RowsWithRole(Role::kValid)), out.valid_path);

  const Dataset& n = prepared.normalized;
  RunManifest& m = out.manifest;
  m.command = "train";
  m.config_hash = HashHex(Fnv1a(artifact.config.dump()));
  m.dataset_fingerprint = FileFingerprint(options.data_path);
  m.seed = options.pipeline.train.seed;
  m.metrics = {{"epochs", trained.history.epochs.size()},
               {"selected_epoch", trained.history.selected_epoch},
               {"labeled_anomalies", n.RowsWithRole(Role::kLabeledAnomaly).size()},
               {"unlabeled", n.RowsWithRole(Role::kUnlabeled).size()},
               {"unlabeled_anomaly_ratio", UnlabeledAnomalyRatio(n)}};
  if (!trained.history.epochs.empty()) {
    const EpochRecord& last = trained.history.epochs.back();
    m.metrics["final_mean_loss"] = last.mean_loss;
    m.metrics["final_mean_reg"] = last.mean_reg;
    m.metrics["epoch_seconds"] = json::array();
    for (const EpochRecord& r : trained.history.epochs) m.metrics["epoch_seconds"].push_back(r.seconds);
  }
  m.outputs = {{"model", out.model_path},
               {"history", out.history_path},
               {"test", out.test_path},
               {"valid", out.valid_path}};
  m.wall_clock_seconds = SecondsSince(start);
  WriteManifest(m, out.manifest_path);
  return out;
}

MetricsReport RunEvaluateCommand(const EvaluateCommandOptions& options) {
  const auto start = Clock::now();
  const ModelArtifact model = LoadModel(options.model_path);
  const Dataset data = LoadCsv(options.data_path, {options.label_column, true});
  const Eigen::VectorXd scores = Predict(model.params, ModelInputs(model, data));
  const MetricsReport report =
      Evaluate(std::span<const double>(scores.data(), scores.size()), data.labels);

  RunManifest m;
  m.command = "evaluate";
  m.config_hash = HashHex(Fnv1a(model.config.dump()));
  m.dataset_fingerprint = FileFingerprint(options.data_path);
  m.seed = model.seed;
  m.metrics = MetricsJson(report);
  m.outputs = {{"model", options.model_path}};
  m.wall_clock_seconds = SecondsSince(start);
  WriteManifest(m, OrDefault(options.manifest_path, "evaluate-manifest.json"));
  return report;
}

std::string RunScoreCommand(const ScoreCommandOptions& options) {
  const auto start = Clock::now();
  const ModelArtifact model = LoadModel(options.model_path);
  const Dataset data = LoadCsv(options.data_path, {options.label_column, false});
  const Eigen::VectorXd scores =
      data.rows() == 0 ? Eigen::VectorXd(0) : Predict(model.params, ModelInputs(model, data));

  std::string text = "row,score\n";
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    text += std::to_string(i) + "," + FormatDouble(scores(i)) + "\n";
  }
  const std::string out_path = OrDefault(options.out_path, "scores.csv");
  WriteText(out_path, text);

  RunManifest m;
  m.command = "score";
  m.config_hash = HashHex(Fnv1a(model.config.dump()));
  m.dataset_fingerprint = FileFingerprint(options.data_path);
  m.seed = model.seed;
  m.metrics = {{"rows", scores.size()}};
  m.outputs = {{"scores", out_path}};
  m.wall_clock_seconds = SecondsSince(start);
  WriteManifest(m, OrDefault(options.manifest_path, "score-manifest.json"));
  return out_path;
}

std::vector<std::string> RunSynthesizeCommand(const SynthesizeCommandOptions& options) {
  const auto start = Clock::now();
  const std::filesystem::path base(EnsureDir(options.out_dir));
  std::vector<std::string> written;
  if (options.kind == "toy") {
    ToyDataset toy = GenerateToy(options.n, options.seed, {options.anomaly_fraction});
    written.push_back((base / "toy.csv").string());
    WriteCsv(toy.data, written.back());
  } else {
    const CaseData c =
        GenerateCase(ParseCaseKind(options.kind), options.n, options.seed, {options.anomaly_fraction});
    written.push_back((base / "train.csv").string());
    WriteCsv(c.train, written.back());
    written.push_back((base / "test.csv").string());
    WriteCsv(c.test, written.back());
  }
  const json config = {{"kind", options.kind},
                       {"n", options.n},
                       {"seed", options.seed},
                       {"anomaly_fraction", options.anomaly_fraction}};
  RunManifest m;
  m.command = "synthesize";
  m.config_hash = HashHex(Fnv1a(config.dump()));
  std::uint64_t fp = Fnv1a("");
  for (const std::string& p : written) fp = Fnv1a(ReadFile(p), fp);
  m.dataset_fingerprint = HashHex(fp);
  m.seed = options.seed;
  m.outputs = written;
  m.wall_clock_seconds = SecondsSince(start);
  WriteManifest(m, (base / "synthesize-manifest.json").string());
  return written;
}

std::vector<SweepCell> RunSweep(const json& config) {
  if (!config.is_object()) Fail(ErrorCode::kInvalidParameter, "sweep config must be an object");
  PipelineOptions defaults;
  std::vector<double> levels;
  std::vector<int> budgets;
  int repeats = 1;
  std::uint64_t seed = 0;
  try {
    if (config.contains("train")) UpdateFromJson(config["train"], defaults.train);
    defaults.labeled_anomalies = config.value("labeled_anomalies", defaults.labeled_anomalies);
    defaults.contamination = config.value("contamination", defaults.contamination);
    defaults.feature_fraction = config.value("feature_fraction", defaults.feature_fraction);
    levels = config.value("contamination_levels", std::vector<double>{});
    budgets = config.value("labeled_budgets", std::vector<int>{});
    repeats = config.value("repeats", 1);
    seed = config.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    Fail(ErrorCode::kInvalidParameter, std::string("bad sweep config: ") + e.what());
  }
  if (repeats < 0) Fail(ErrorCode::kInvalidParameter, "repeats must be >= 0");

  std::vector<SweepCell> cells;
  if (levels.empty() && budgets.empty()) return cells;

  // Data source per repeat: a fixed file, or a fresh synthetic draw.
  std::optional<Dataset> file_data;
  if (config.contains("data")) {
    file_data = LoadCsv(config["data"].get<std::string>(),
                        {config.value("label_col", std::string("label")), true});
  }
  const json synth = config.value("synthetic", json{{"kind", "toy"}, {"n", 5000}});
  auto data_for = [&](std::uint64_t cell_seed) -> std::pair<Dataset, std::optional<Dataset>> {
    if (file_data) return {*file_data, std::nullopt};
    const std::string kind = synth.value("kind", std::string("toy"));
    const int n = synth.value("n", 5000);
    const double frac = synth.value("anomaly_fraction", 0.05);
    if (kind == "toy") return {GenerateToy(n, cell_seed, {frac}).data, std::nullopt};
    CaseData c = GenerateCase(ParseCaseKind(kind), n, cell_seed, {frac});
    return {std::move(c.train), std::move(c.test)};
  };

  auto run_cell = [&](const std::string& sweep, double setting, PipelineOptions options,
                      int repeat) {
    SweepCell cell;
    cell.sweep = sweep;
    cell.setting = setting;
    cell.repeat = repeat;
    cell.seed = seed + static_cast<std::uint64_t>(repeat);
    options.train.seed = cell.seed;
    try {
      auto [train, test] = data_for(cell.seed);
      if (options.labeled_anomalies > 0 && train.has_labels()) {
        // A budget beyond the available training anomalies is infeasible.
        long anomalies = 0;
        for (int y : train.labels) anomalies += y;
        const double share = test ? 1.0 : options.ratios.train;
        if (options.labeled_anomalies > std::floor(share * anomalies + 1e-9)) {
          Fail(ErrorCode::kUnusableDataset,
               "labeled budget " + std::to_string(options.labeled_anomalies) +
                   " exceeds available training anomalies");
        }
      }
      const ExperimentResult r = RunExperiment(train, options, test);
      cell.auc_pr = r.test_metrics.auc_pr;
      cell.auc_roc = r.test_metrics.auc_roc;
    } catch (const Error& e) {
      cell.status = std::string(ErrorCodeName(e.code())) + ": " + e.what();
      cell.auc_pr = cell.auc_roc = std::numeric_limits<double>::quiet_NaN();
    }
    cells.push_back(std::move(cell));
  };

  for (double level : levels) {
    for (int r = 0; r < repeats; ++r) {
      PipelineOptions o = defaults;
      o.contamination = level;
      run_cell("contamination", level, o, r);
    }
  }
  for (int budget : budgets) {
    for (int r = 0; r < repeats; ++r) {
      PipelineOptions o = defaults;
      o.labeled_anomalies = budget;
      run_cell("labeled", budget, o, r);
    }
  }
  return cells;
}

std::string FormatSweep(const std::vector<SweepCell>& cells) {
  std::string out = std::string(kSweepColumns) + "\n";
  for (const SweepCell& c : cells) {
    std::string status = c.status;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out += c.sweep + "," + FormatDouble(c.setting) + "," + std::to_string(c.repeat) + "," +
           std::to_string(c.seed) + "," + (std::isnan(c.auc_pr) ? "" : FormatDouble(c.auc_pr)) +
           "," + (std::isnan(c.auc_roc) ? "" : FormatDouble(c.auc_roc)) + "," + status + "\n";
  }
  return out;
}

std::vector<SweepCell> RunSweepCommand(const SweepCommandOptions& options) {
  const auto start = Clock::now();
  const std::string text = ReadFile(options.config_path);
  json config;
  try {
    config = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kInvalidParameter, options.config_path + ": " + e.what());
  }
  const std::vector<SweepCell> cells = RunSweep(config);
  const std::string out_path = OrDefault(options.out_path, "sweep.csv");
  WriteText(out_path, FormatSweep(cells));

  RunManifest m;
  m.command = "sweep";
  m.config_hash = HashHex(Fnv1a(config.dump()));
  m.dataset_fingerprint = config.contains("data")
                              ? FileFingerprint(config["data"].get<std::string>())
                              : HashHex(Fnv1a(config.value("synthetic", json::object()).dump()));
  m.seed = config.value("seed", std::uint64_t{0});
  std::size_t ok = 0;
  for (const SweepCell& c : cells) ok += c.status == "ok";
  m.metrics = {{"cells", cells.size()}, {"ok", ok}};
  m.outputs = {{"results", out_path}};
  m.wall_clock_seconds = SecondsSince(start);
  WriteManifest(m, OrDefault(options.manifest_path, "sweep-manifest.json"));
  return cells;
}

}  // namespace rosas
