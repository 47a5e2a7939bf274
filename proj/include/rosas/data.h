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

// Tabular datasets with anomaly labels and per-row roles, plus the
// preparation steps applied before training: min-max normalization,
// stratified splitting, labeled-anomaly selection and contamination control.
// Every operation returns a new dataset and leaves its input untouched.

#ifndef ROSAS_DATA_H_
#define ROSAS_DATA_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rosas/random.h"

namespace rosas {

enum class Role : std::uint8_t {
  kTrain,           // training row not yet designated
  kLabeledAnomaly,  // X_A
  kUnlabeled,       // X_U
  kValid,
  kTest,
};

std::string_view RoleName(Role role);

inline bool IsTrainingRole(Role role) {
  return role == Role::kTrain || role == Role::kLabeledAnomaly ||
         role == Role::kUnlabeled;
}

// Per-feature min/max of the training rows; applies (v - min) / (max - min)
// and maps constant features to 0. Values outside the training range are not
// clipped.
struct NormState {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  bool empty() const { return min.size() == 0; }
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x) const;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::string label_name = "label";
  Eigen::MatrixXd x;        // N x D
  std::vector<int> labels;  // 1 = anomaly, 0 = normal; empty when unlabeled
  std::vector<Role> roles;
  std::vector<std::uint8_t> injected;  // 1 for synthetic contamination rows
  NormState norm;

  Eigen::Index rows() const { return x.rows(); }
  int dim() const { return static_cast<int>(x.cols()); }
  bool has_labels() const {
    return static_cast<Eigen::Index>(labels.size()) == rows();
  }

  std::vector<Eigen::Index> RowsWithRole(Role role) const;
  std::vector<Eigen::Index> TrainingRows() const;
  Eigen::MatrixXd Gather(std::span<const Eigen::Index> rows) const;
  std::vector<int> GatherLabels(std::span<const Eigen::Index> rows) const;
  // Copy restricted to `rows`, in the given order.
  Dataset Subset(std::span<const Eigen::Index> rows) const;

  // Throws kContractViolation when sizes disagree or a labeled-anomaly row
  // is not an anomaly.
  void Validate() const;
};

// Builds an unassigned (all kTrain) dataset from in-memory arrays.
Dataset MakeDataset(Eigen::MatrixXd x, std::vector<int> labels,
                    std::vector<std::string> feature_names = {});

struct CsvOptions {
  // Column holding the binary label ({0,1} or {-1,+1}).
  std::optional<std::string> label_column;
  // When false the label column is skipped without being parsed.
  bool read_labels = true;
};

// Header row required; every other column must be numeric and finite.
// Errors are kLoadError and name the offending row and column.
Dataset LoadCsv(const std::string& path, const CsvOptions& options);
Dataset ParseCsv(std::string_view text, const CsvOptions& options,
                 std::string_view source_name = "<memory>");

// Writes features (and labels when present) with shortest round-trip
// formatting of every value.
void WriteCsv(const Dataset& data, const std::string& path);
std::string FormatCsv(const Dataset& data);

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double v);

// Scales every row with min/max taken over the training-role rows. A dataset
// that is already normalized keeps a composed NormState, so the recorded
// state always maps the original values.
Dataset MinMaxNormalize(const Dataset& data);

struct SplitRatios {
  double train = 0.6;
  double valid = 0.2;
  double test = 0.2;
};

// Stratified split: anomalies and normal rows are split separately, with
// floor() sizes for valid and test and the remainder going to train.
Dataset SplitDataset(const Dataset& data, const SplitRatios& ratios, Rng& rng);

// Marks min(n, available) random training anomalies as labeled; every other
// training row becomes unlabeled.
Dataset SelectLabeledAnomalies(const Dataset& data, int n, Rng& rng);

struct ContaminationSpec {
  double target_ratio = 0.02;
  double feature_fraction = 0.05;
};

// Copy of `source_a` with ceil(fraction * D) distinct random features taken
// from `source_b`.
Eigen::VectorXd InjectAnomaly(const Eigen::VectorXd& source_a,
                              const Eigen::VectorXd& source_b,
                              double feature_fraction, Rng& rng);

// Brings the anomaly ratio of the unlabeled pool to the target, removing
// unlabeled anomalies or appending injected ones built from real training
// anomalies. The result is within 1/|X_U| of the target.
Dataset AdjustContamination(const Dataset& data, const ContaminationSpec& spec,
                            Rng& rng);

// Anomaly ratio among unlabeled rows (0 for an empty pool).
double UnlabeledAnomalyRatio(const Dataset& data);

}  // namespace rosas

#endif  // ROSAS_DATA_H_
