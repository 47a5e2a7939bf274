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

#include "rosas/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "rosas/error.h"

namespace rosas {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view Unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::optional<double> ParseNumber(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

[[noreturn]] void CellError(std::string_view source, std::size_t line,
                            std::string_view column, const std::string& what) {
  std::ostringstream msg;
  msg << source << ": line " << line << ", column '" << column << "': " << what;
  Fail(ErrorCode::kLoadError, msg.str());
}

void Shuffle(std::vector<Eigen::Index>& v, Rng& rng) {
  // Explicit Fisher-Yates so the permutation depends only on the generator.
  for (std::size_t i = v.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(v[i - 1], v[pick(rng)]);
  }
}

std::size_t PortionSize(double ratio, std::size_t n) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

}  // namespace

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kTrain:
      return "train";
    case Role::kLabeledAnomaly:
      return "labeled_anomaly";
    case Role::kUnlabeled:
      return "unlabeled";
    case Role::kValid:
      return "valid";
    case Role::kTest:
      return "test";
  }
  return "unknown";
}

Eigen::MatrixXd NormState::Apply(const Eigen::MatrixXd& x) const {
  Require(x.cols() == min.size(),
          "normalization state covers " + std::to_string(min.size()) +
              " features, data has " + std::to_string(x.cols()));
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double range = max(j) - min(j);
    if (range > 0.0) {
      out.col(j) = (x.col(j).array() - min(j)) / range;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

std::vector<Eigen::Index> Dataset::RowsWithRole(Role role) const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < rows(); ++i) {
    if (roles[i] == role) out.push_back(i);
  }
  return out;
}

std::vector<Eigen::Index> Dataset::TrainingRows() const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < rows(); ++i) {
    if (IsTrainingRole(roles[i])) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXd Dataset::Gather(std::span<const Eigen::Index> idx) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = x.row(idx[i]);
  return out;
}

std::vector<int> Dataset::GatherLabels(std::span<const Eigen::Index> idx) const {
  Require(has_labels(), "dataset carries no labels");
  std::vector<int> out;
  out.reserve(idx.size());
  for (Eigen::Index i : idx) out.push_back(labels[i]);
  return out;
}

Dataset Dataset::Subset(std::span<const Eigen::Index> idx) const {
  Dataset out;
  out.feature_names = feature_names;
  out.label_name = label_name;
  out.norm = norm;
  out.x = Gather(idx);
  for (Eigen::Index i : idx) {
    if (has_labels()) out.labels.push_back(labels[i]);
    out.roles.push_back(roles[i]);
    out.injected.push_back(injected[i]);
  }
  return out;
}

void Dataset::Validate() const {
  const auto n = static_cast<std::size_t>(rows());
  Require(roles.size() == n && injected.size() == n,
          "role and provenance vectors must cover every row");
  Require(labels.empty() || labels.size() == n, "label vector length differs from row count");
  Require(feature_names.empty() ||
              feature_names.size() == static_cast<std::size_t>(x.cols()),
          "feature name count differs from column count");
  for (std::size_t i = 0; i < n; ++i) {
    if (roles[i] == Role::kLabeledAnomaly) {
      Require(has_labels() && labels[i] == 1,
              "labeled-anomaly row " + std::to_string(i) + " is not an anomaly");
    }
  }
}

Dataset MakeDataset(Eigen::MatrixXd x, std::vector<int> labels,
                    std::vector<std::string> feature_names) {
  Dataset d;
  d.x = std::move(x);
  d.labels = std::move(labels);
  if (feature_names.empty()) {
    for (Eigen::Index j = 0; j < d.x.cols(); ++j) {
      feature_names.push_back("f" + std::to_string(j));
    }
  }
  d.feature_names = std::move(feature_names);
  d.roles.assign(d.rows(), Role::kTrain);
  d.injected.assign(d.rows(), 0);
  for (int y : d.labels) Require(y == 0 || y == 1, "labels must be 0 or 1");
  d.Validate();
  return d;
}

Dataset ParseCsv(std::string_view text, const CsvOptions& options,
                 std::string_view source_name) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) {
    Fail(ErrorCode::kLoadError, std::string(source_name) + ": missing header row");
  }

  std::vector<std::string_view> header = SplitFields(lines[0]);
  for (auto& h : header) h = Unquote(h);
  std::optional<std::size_t> label_col;
  if (options.label_column) {
    auto it = std::find(header.begin(), header.end(), *options.label_column);
    if (it == header.end()) {
      Fail(ErrorCode::kLoadError, std::string(source_name) + ": label column '" +
                                      *options.label_column + "' not found");
    }
    label_col = static_cast<std::size_t>(it - header.begin());
  }
  const bool read_labels = label_col.has_value() && options.read_labels;

  Dataset d;
  if (label_col) d.label_name = std::string(header[*label_col]);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) d.feature_names.emplace_back(header[c]);
  }
  const std::size_t n_features = d.feature_names.size();
  const std::size_t n_rows = lines.size() - 1;
  d.x.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_features));
  std::vector<double> raw_labels;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::size_t line_no = r + 2;
    const std::vector<std::string_view> fields = SplitFields(lines[r + 1]);
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << source_name << ": line " << line_no << " has " << fields.size()
          << " fields, header has " << header.size();
      Fail(ErrorCode::kLoadError, msg.str());
    }
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_col) {
        if (!read_labels) continue;
        const std::optional<double> v = ParseNumber(Unquote(fields[c]));
        if (!v || (*v != 0.0 && *v != 1.0 && *v != -1.0)) {
          CellError(source_name, line_no, header[c],
                    "label '" + std::string(fields[c]) + "' is not binary");
        }
        raw_labels.push_back(*v);
        continue;
      }
      const std::optional<double> v = ParseNumber(fields[c]);
      if (!v) {
        CellError(source_name, line_no, header[c],
                  "'" + std::string(fields[c]) + "' is not numeric");
      }
      if (!std::isfinite(*v)) {
        CellError(source_name, line_no, header[c], "value is not finite");
      }
      d.x(static_cast<Eigen::Index>(r), col++) = *v;
    }
  }
  if (read_labels) {
    const bool has_zero = std::find(raw_labels.begin(), raw_labels.end(), 0.0) != raw_labels.end();
    const bool has_minus = std::find(raw_labels.begin(), raw_labels.end(), -1.0) != raw_labels.end();
    if (has_zero && has_minus) {
      Fail(ErrorCode::kLoadError,
           std::string(source_name) + ": label column '" + d.label_name +
               "' mixes {0,1} and {-1,+1} encodings");
    }
    for (double v : raw_labels) d.labels.push_back(v == 1.0 ? 1 : 0);
  }
  d.roles.assign(n_rows, Role::kTrain);
  d.injected.assign(n_rows, 0);
  return d;
}

Dataset LoadCsv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kLoadError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCsv(buf.str(), options, path);
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  Require(ec == std::errc(), "double formatting failed");
  return std::string(buf, ptr);
}

std::string FormatCsv(const Dataset& data) {
  std::string out;
  for (std::size_t j = 0; j < data.feature_names.size(); ++j) {
    if (j) out += ',';
    out += data.feature_names[j];
  }
  if (data.has_labels()) {
    out += ',';
    out += data.label_name;
  }
  out += '\n';
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) {
      if (j) out += ',';
      out += FormatDouble(data.x(i, j));
    }
    if (data.has_labels()) {
      out += ',';
      out += std::to_string(data.labels[i]);
    }
    out += '\n';
  }
  return out;
}

void WriteCsv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, path + ": cannot open for writing");
  out << FormatCsv(data);
  if (!out) Fail(ErrorCode::kIo, path + ": write failed");
}

Dataset MinMaxNormalize(const Dataset& data) {
  const std::vector<Eigen::Index> train = data.TrainingRows();
  Require(!train.empty(), "normalization needs at least one training-role row");
  NormState pass;
  pass.min.resize(data.x.cols());
  pass.max.resize(data.x.cols());
  for (Eigen::Index j = 0; j < data.x.cols(); ++j) {
    double lo = data.x(train[0], j), hi = lo;
    for (Eigen::Index i : train) {
      lo = std::min(lo, data.x(i, j));
      hi = std::max(hi, data.x(i, j));
    }
    pass.min(j) = lo;
    pass.max(j) = hi;
  }
  Dataset out = data;
  out.x = pass.Apply(data.x);
  if (data.norm.empty()) {
    out.norm = pass;
  } else {
    // Compose with the earlier pass: raw -> earlier -> this pass.
    const Eigen::VectorXd range = data.norm.max - data.norm.min;
    out.norm.min = data.norm.min.array() + pass.min.array() * range.array();
    out.norm.max = data.norm.min.array() + pass.max.array() * range.array();
  }
  return out;
}

Dataset SplitDataset(const Dataset& data, const SplitRatios& ratios, Rng& rng) {
  if (ratios.train < 0.0 || ratios.valid < 0.0 || ratios.test < 0.0 ||
      std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    Fail(ErrorCode::kInvalidParameter, "split ratios must be non-negative and sum to 1");
  }
  Require(data.has_labels(), "stratified split needs labels");
  if (data.rows() < 5) {
    Fail(ErrorCode::kUnusableDataset, "split needs at least 5 rows, got " +
                                          std::to_string(data.rows()));
  }
  Dataset out = data;
  for (int cls : {1, 0}) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (data.labels[i] == cls) idx.push_back(i);
    }
    Shuffle(idx, rng);
    const std::size_t n_valid = PortionSize(ratios.valid, idx.size());
    const std::size_t n_test = PortionSize(ratios.test, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      Role role = Role::kTrain;
      if (k < n_valid) {
        role = Role::kValid;
      } else if (k < n_valid + n_test) {
        role = Role::kTest;
      }
      out.roles[idx[k]] = role;
    }
  }
  return out;
}

Dataset SelectLabeledAnomalies(const Dataset& data, int n, Rng& rng) {
  if (n < 0) Fail(ErrorCode::kInvalidParameter, "labeled-anomaly budget must be >= 0");
  Require(data.has_labels(), "labeled-anomaly selection needs labels");
  std::vector<Eigen::Index> anomalies;
  for (Eigen::Index i : data.TrainingRows()) {
    if (data.labels[i] == 1 && !data.injected[i]) anomalies.push_back(i);
  }
  if (anomalies.empty()) {
    Fail(ErrorCode::kUnusableDataset, "training split contains no anomalies");
  }
  Shuffle(anomalies, rng);
  Dataset out = data;
  for (Eigen::Index i : data.TrainingRows()) out.roles[i] = Role::kUnlabeled;
  const std::size_t take = std::min<std::size_t>(n, anomalies.size());
  for (std::size_t k = 0; k < take; ++k) out.roles[anomalies[k]] = Role::kLabeledAnomaly;
  return out;
}

Eigen::VectorXd InjectAnomaly(const Eigen::VectorXd& source_a,
                              const Eigen::VectorXd& source_b,
                              double feature_fraction, Rng& rng) {
  if (!(feature_fraction > 0.0 && feature_fraction <= 1.0)) {
    Fail(ErrorCode::kInvalidParameter, "feature fraction must lie in (0, 1]");
  }
  Require(source_a.size() == source_b.size(), "injection sources differ in width");
  const auto dim = static_cast<std::size_t>(source_a.size());
  std::size_t count = static_cast<std::size_t>(
      std::ceil(feature_fraction * static_cast<double>(dim) - 1e-9));
  count = std::clamp<std::size_t>(count, dim == 0 ? 0 : 1, dim);
  std::vector<Eigen::Index> pos(dim);
  std::iota(pos.begin(), pos.end(), 0);
  Eigen::VectorXd out = source_a;
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, dim - 1);
    std::swap(pos[i], pos[pick(rng)]);
    out(pos[i]) = source_b(pos[i]);
  }
  return out;
}

double UnlabeledAnomalyRatio(const Dataset& data) {
  const std::vector<Eigen::Index> pool = data.RowsWithRole(Role::kUnlabeled);
  if (pool.empty()) return 0.0;
  long anomalies = 0;
  for (Eigen::Index i : pool) anomalies += data.labels[i];
  return static_cast<double>(anomalies) / static_cast<double>(pool.size());
}

Dataset AdjustContamination(const Dataset& data, const ContaminationSpec& spec,
                            Rng& rng) {
  const double t = spec.target_ratio;
  if (!(t >= 0.0 && t < 0.5)) {
    Fail(ErrorCode::kInvalidParameter, "contamination target must lie in [0, 0.5)");
  }
  if (!(spec.feature_fraction > 0.0 && spec.feature_fraction <= 1.0)) {
    Fail(ErrorCode::kInvalidParameter, "feature fraction must lie in (0, 1]");
  }
  Require(data.has_labels(), "contamination control needs labels");
  const std::vector<Eigen::Index> pool = data.RowsWithRole(Role::kUnlabeled);
  Require(!pool.empty(), "contamination control needs an unlabeled pool");
  std::vector<Eigen::Index> pool_anomalies;
  for (Eigen::Index i : pool) {
    if (data.labels[i] == 1) pool_anomalies.push_back(i);
  }
  const double n = static_cast<double>(pool.size());
  const double a = static_cast<double>(pool_anomalies.size());
  // Solve (a - r) / (n - r) = t for removals, (a + r) / (n + r) = t for
  // injections, rounded to the nearest whole row.
  const long change = std::lround((t * n - a) / (1.0 - t));
  if (change == 0) return data;

  if (change < 0) {
    const std::size_t remove =
        std::min<std::size_t>(static_cast<std::size_t>(-change), pool_anomalies.size());
    Shuffle(pool_anomalies, rng);
    std::vector<std::uint8_t> drop(data.rows(), 0);
    for (std::size_t k = 0; k < remove; ++k) drop[pool_anomalies[k]] = 1;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (!drop[i]) keep.push_back(i);
    }
    return data.Subset(keep);
  }

  std::vector<Eigen::Index> sources;
  for (Eigen::Index i : data.TrainingRows()) {
    if (data.labels[i] == 1 && !data.injected[i]) sources.push_back(i);
  }
  if (sources.empty()) {
    Fail(ErrorCode::kUnusableDataset,
         "contamination target unreachable: no real training anomalies to inject from");
  }
  Dataset out = data;
  const Eigen::Index old_rows = data.rows();
  out.x.conservativeResize(old_rows + change, Eigen::NoChange);
  std::uniform_int_distribution<std::size_t> pick(0, sources.size() - 1);
  for (long k = 0; k < change; ++k) {
    const std::size_t ia = pick(rng);
    std::size_t ib = ia;
    if (sources.size() > 1) {
      std::uniform_int_distribution<std::size_t> other(0, sources.size() - 2);
      ib = other(rng);
      if (ib >= ia) ++ib;
    }
    out.x.row(old_rows + k) =
        InjectAnomaly(data.x.row(sources[ia]).transpose(),
                      data.x.row(sources[ib]).transpose(), spec.feature_fraction, rng)
            .transpose();
    out.labels.push_back(1);
    out.roles.push_back(Role::kUnlabeled);
    out.injected.push_back(1);
  }
  return out;
}

}  // namespace rosas
