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

#ifndef EPFX_BEESWARM_H_
#define EPFX_BEESWARM_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epfx/explain.h"

namespace epfx {

struct BeeswarmPoint {
  std::string instance_id;
  double feature_value = 0.0;  // raw units
  double shap_value = 0.0;     // averaged over output hours
};

struct BeeswarmRow {
  FeatureId feature;
  int feature_index = 0;
  double mean_abs_shap = 0.0;  // pooled over instances and output hours
  std::vector<BeeswarmPoint> points;
};

// Top `k` features by mean |SHAP|, ties broken by feature index. `raw` is
// instances x features, aligned with the tensor. k is clamped to the
// feature count.
std::vector<BeeswarmRow> BeeswarmTable(const AttributionTensor& shap, const Eigen::MatrixXd& raw,
                                       int k);

}  // namespace epfx

#endif  // EPFX_BEESWARM_H_
