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

// Threshold-free ranking metrics over anomaly scores. Labels are 1 for
// anomalies (positives) and 0 otherwise.

#ifndef ROSAS_EVAL_H_
#define ROSAS_EVAL_H_

#include <span>

namespace rosas {

// Mann-Whitney statistic: probability that a random positive outscores a
// random negative, ties credited 1/2. O(n log n). Throws kUndefinedMetric
// unless both classes are present.
double AucRoc(std::span<const double> scores, std::span<const int> labels);

// Average precision: sum over descending distinct score thresholds of
// (recall_k - recall_{k-1}) * precision_k, tied scores entering as one block.
// No interpolation. Throws kUndefinedMetric without positives.
double AucPr(std::span<const double> scores, std::span<const int> labels);

struct MetricsReport {
  double auc_roc = 0.0;
  double auc_pr = 0.0;
  int n_pos = 0;
  int n_neg = 0;
};

MetricsReport Evaluate(std::span<const double> scores,
                       std::span<const int> labels);

}  // namespace rosas

#endif  // ROSAS_EVAL_H_
