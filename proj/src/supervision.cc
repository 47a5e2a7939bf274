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

#include "rosas/supervision.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "rosas/error.h"

namespace rosas {

std::vector<double> SampleWeights(int k, double alpha, Rng& rng) {
  if (!(alpha > 0.0)) {
    Fail(ErrorCode::kInvalidParameter, "interpolation alpha must be > 0");
  }
  if (k < 2) {
    Fail(ErrorCode::kInvalidParameter,
         "interpolation needs k >= 2 sources, got " + std::to_string(k));
  }
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> w(k);
  double total = 0.0;
  // Gamma(alpha < 1) can underflow to zero; an all-zero draw is redrawn.
  while (!(total > 0.0)) {
    for (double& v : w) v = gamma(rng);
    total = std::accumulate(w.begin(), w.end(), 0.0);
  }
  if (k == 2) {
    w[0] /= total;
    w[1] = 1.0 - w[0];
    return w;
  }
  for (double& v : w) v /= total;
  return w;
}

AugmentedSample Interpolate(const LabeledBatch& batch,
                            std::vector<int> sources,
                            std::vector<double> lambdas) {
  Require(sources.size() == lambdas.size() && !sources.empty(),
          "interpolation needs one weight per source");
  AugmentedSample s;
  s.x_tilde = Eigen::VectorXd::Zero(batch.x.cols());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const int src = sources[i];
    Require(src >= 0 && src < batch.size(),
            "interpolation source index " + std::to_string(src) +
                " outside batch");
    s.x_tilde += lambdas[i] * batch.x.row(src).transpose();
    s.y_tilde += lambdas[i] * batch.y(src);
  }
  s.sources = std::move(sources);
  s.lambdas = std::move(lambdas);
  return s;
}

std::vector<AugmentedSample> AugmentBatch(const LabeledBatch& batch, int k,
                                          double alpha, int count, Rng& rng) {
  if (batch.size() < k) {
    Fail(ErrorCode::kInsufficientBatch,
         "cannot draw " + std::to_string(k) + " distinct sources from a batch of " +
             std::to_string(batch.size()));
  }
  Require(count >= 0, "augmented sample count must be non-negative");
  std::vector<int> all(batch.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<AugmentedSample> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    // Partial Fisher-Yates: the first k slots are a uniform k-subset.
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(all.size()) - 1);
      std::swap(all[i], all[pick(rng)]);
    }
    std::vector<int> sources(all.begin(), all.begin() + k);
    out.push_back(Interpolate(batch, std::move(sources),
                              SampleWeights(k, alpha, rng)));
  }
  return out;
}

}  // namespace rosas
