/*
 * Copyright 2026 The epfx Authors.
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

#include "epfx/beeswarm.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epfx/error.h"

namespace epfx {

std::vector<BeeswarmRow> BeeswarmTable(const AttributionTensor& shap, const Eigen::MatrixXd& raw,
                                       int k) {
  const int n = shap.instances();
  const int f_count = shap.num_features();
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "beeswarm needs k >= 1");
  if (raw.rows() != n || raw.cols() != f_count) {
    throw Error(ErrorCode::kDimensionMismatch, "raw feature block does not match the tensor");
  }
  std::vector<double> score(f_count, 0.0);
  for (int f = 0; f < f_count; ++f) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int o = 0; o < shap.outputs; ++o) sum += std::abs(shap.at(i, o, f));
    }
    score[f] = n == 0 ? 0.0 : sum / (static_cast<double>(n) * shap.outputs);
  }
  std::vector<int> order(f_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });
  order.resize(std::min(k, f_count));

  std::vector<BeeswarmRow> rows;
  for (int f : order) {
    BeeswarmRow row{shap.features[f], f, score[f], {}};
    for (int i = 0; i < n; ++i) {
      double mean = 0.0;
      for (int o = 0; o < shap.outputs; ++o) mean += shap.at(i, o, f);
      row.points.push_back({shap.instance_ids[i], raw(i, f), mean / shap.outputs});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace epfx
