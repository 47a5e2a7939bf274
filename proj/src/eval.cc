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

#include "rosas/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rosas/error.h"

namespace rosas {
namespace {

struct Counts {
  long pos = 0;
  long neg = 0;
};

Counts CountClasses(std::span<const double> scores,
                    std::span<const int> labels) {
  Require(scores.size() == labels.size(),
          "score and label vectors differ in length");
  for (double s : scores) {
    if (!std::isfinite(s)) {
      Fail(ErrorCode::kInvalidParameter, "scores must be finite");
    }
  }
  Counts c;
  for (int y : labels) {
    if (y == 1) {
      ++c.pos;
    } else if (y == 0) {
      ++c.neg;
    } else {
      Fail(ErrorCode::kInvalidParameter,
           "labels must be 0 or 1, got " + std::to_string(y));
    }
  }
  return c;
}

// Row indices ordered by descending score.
std::vector<std::size_t> DescendingOrder(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

}  // namespace

double AucRoc(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = CountClasses(scores, labels);
  if (c.pos == 0 || c.neg == 0) {
    Fail(ErrorCode::kUndefinedMetric,
         "AUC-ROC needs both classes (positives=" + std::to_string(c.pos) +
             ", negatives=" + std::to_string(c.neg) + ")");
  }
  const std::vector<std::size_t> order = DescendingOrder(scores);
  // Walk tie blocks from the top; every positive beats the negatives that
  // remain below its block and half of the negatives tied with it.
  double wins = 0.0;
  long neg_above = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    long pos_block = 0, neg_block = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? pos_block : neg_block) += 1;
      ++j;
    }
    const long neg_below = c.neg - neg_above - neg_block;
    wins += static_cast<double>(pos_block * neg_below) +
            0.5 * static_cast<double>(pos_block * neg_block);
    neg_above += neg_block;
    i = j;
  }
  return wins / (static_cast<double>(c.pos) * static_cast<double>(c.neg));
}

double AucPr(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = CountClasses(scores, labels);
  if (c.pos == 0) {
    Fail(ErrorCode::kUndefinedMetric, "AUC-PR needs at least one positive");
  }
  const std::vector<std::size_t> order = DescendingOrder(scores);
  const double n_pos = static_cast<double>(c.pos);
  double ap = 0.0;
  double prev_recall = 0.0;
  long tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    const double recall = static_cast<double>(tp) / n_pos;
    const double precision =
        static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

MetricsReport Evaluate(std::span<const double> scores,
                       std::span<const int> labels) {
  const Counts c = CountClasses(scores, labels);
  MetricsReport r;
  r.auc_roc = AucRoc(scores, labels);
  r.auc_pr = AucPr(scores, labels);
  r.n_pos = static_cast<int>(c.pos);
  r.n_neg = static_cast<int>(c.neg);
  return r;
}

}  // namespace rosas
