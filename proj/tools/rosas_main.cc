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

// rosas: train, evaluate and apply semi-supervised anomaly scorers on
// tabular CSV data.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rosas/commands.h"
#include "rosas/error.h"

namespace {

void PrintError(const std::string& code, const std::string& message) {
  nlohmann::json record = {{"error", {{"code", code}, {"message", message}}}};
  std::cerr << record.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-supervised anomaly detection with interpolated continuous supervision"};
  app.require_subcommand(1);

  // train
  rosas::TrainCommandOptions train;
  std::string ablation = "full";
  bool verbose = false;
  rosas::TrainConfig& tc = train.pipeline.train;
  CLI::App* train_cmd = app.add_subcommand("train", "Prepare a labeled CSV and train a scorer");
  train_cmd->add_option("--data", train.data_path, "CSV with header row")->required();
  train_cmd->add_option("--label-col", train.label_column, "Binary label column")
      ->capture_default_str();
  train_cmd->add_option("--labeled-anomalies", train.pipeline.labeled_anomalies,
                        "Training anomalies revealed as labeled")
      ->capture_default_str();
  train_cmd->add_option("--contamination", train.pipeline.contamination,
                        "Target anomaly ratio of the unlabeled pool (negative: keep as split)")
      ->capture_default_str();
  train_cmd->add_option("--epochs", tc.epochs)->capture_default_str();
  train_cmd->add_option("--batches-per-epoch", tc.batches_per_epoch)->capture_default_str();
  train_cmd->add_option("--batch-size", tc.batch_size)->capture_default_str();
  train_cmd->add_option("--lr", tc.learning_rate)->capture_default_str();
  train_cmd->add_option("--rep-dim", tc.rep_dim, "Representation dimension H")
      ->capture_default_str();
  train_cmd->add_option("--k", tc.k, "Sources per augmented sample")->capture_default_str();
  train_cmd->add_option("--alpha", tc.alpha, "Interpolation weight concentration")
      ->capture_default_str();
  train_cmd->add_option("--margin", tc.margin)->capture_default_str();
  train_cmd->add_option("--temperature", tc.temperature)->capture_default_str();
  train_cmd->add_option("--weight-decay", tc.weight_decay)->capture_default_str();
  train_cmd->add_option("--seed", tc.seed)->capture_default_str();
  train_cmd
      ->add_option("--ablation", ablation,
                   "full | discrete_targets | plain_regression | no_consistency | no_regularizer")
      ->capture_default_str();
  train_cmd->add_flag("--no-model-selection", "Keep last-epoch parameters")
      ->each([&](const std::string&) { tc.select_by_validation = false; });
  train_cmd->add_option("--out", train.out_dir, "Output directory (default $ROSAS_OUTPUT_DIR or .)");
  train_cmd->add_flag("--verbose", verbose, "Print per-epoch JSON records to stderr");

  // evaluate
  rosas::EvaluateCommandOptions evaluate;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Report AUC-ROC and AUC-PR on labeled data");
  eval_cmd->add_option("--model", evaluate.model_path)->required();
  eval_cmd->add_option("--data", evaluate.data_path)->required();
  eval_cmd->add_option("--label-col", evaluate.label_column)->capture_default_str();
  eval_cmd->add_option("--manifest", evaluate.manifest_path);

  // score
  rosas::ScoreCommandOptions score;
  std::string score_label;
  CLI::App* score_cmd = app.add_subcommand("score", "Write anomaly scores as row,score CSV");
  score_cmd->add_option("--model", score.model_path)->required();
  score_cmd->add_option("--data", score.data_path)->required();
  score_cmd->add_option("--label-col", score_label, "Column to ignore if present");
  score_cmd->add_option("--out", score.out_path);
  score_cmd->add_option("--manifest", score.manifest_path);

  // synthesize
  rosas::SynthesizeCommandOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synthesize", "Write a synthetic labeled dataset");
  synth_cmd->add_option("--kind", synth.kind, "toy | clustered | scattered | novel")
      ->capture_default_str();
  synth_cmd->add_option("--n", synth.n)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--anomaly-fraction", synth.anomaly_fraction)->capture_default_str();
  synth_cmd->add_option("--out", synth.out_dir);

  // sweep
  rosas::SweepCommandOptions sweep;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", std::string("Run a contamination / labeled-budget grid. Output columns: ") +
                   rosas::kSweepColumns);
  sweep_cmd->add_option("--config", sweep.config_path, "Sweep JSON")->required();
  sweep_cmd->add_option("--out", sweep.out_path);
  sweep_cmd->add_option("--manifest", sweep.manifest_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      tc.ablation = rosas::ParseAblationMode(ablation);
      train.quiet = !verbose;
      const rosas::TrainCommandOutput out = rosas::RunTrainCommand(train);
      std::cout << nlohmann::json{{"model", out.model_path}, {"manifest", out.manifest_path}}.dump()
                << "\n";
    } else if (*eval_cmd) {
      const rosas::MetricsReport r = rosas::RunEvaluateCommand(evaluate);
      std::cout << nlohmann::json{{"auc_roc", r.auc_roc},
                                  {"auc_pr", r.auc_pr},
                                  {"n_pos", r.n_pos},
                                  {"n_neg", r.n_neg}}
                       .dump()
                << "\n";
    } else if (*score_cmd) {
      if (!score_label.empty()) score.label_column = score_label;
      std::cout << rosas::RunScoreCommand(score) << "\n";
    } else if (*synth_cmd) {
      for (const std::string& p : rosas::RunSynthesizeCommand(synth)) std::cout << p << "\n";
    } else if (*sweep_cmd) {
      const auto cells = rosas::RunSweepCommand(sweep);
      std::cout << rosas::FormatSweep(cells);
    }
  } catch (const rosas::Error& e) {
    PrintError(std::string(rosas::ErrorCodeName(e.code())), e.what());
    return 2;
  } catch (const std::exception& e) {
    PrintError("internal", e.what());
    return 3;
  }
  return 0;
}
