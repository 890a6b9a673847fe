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

#ifndef EPFX_COMPLEXITY_H_
#define EPFX_COMPLEXITY_H_

#include "epfx/explain.h"
#include "epfx/heatmap.h"
#include "json.hpp"

namespace epfx {

inline constexpr double kImportanceThreshold = 0.5;

struct ComplexityReport {
  double non_linearity = 0.0;
  double non_homogeneity = 0.0;
  double important_vars_per_hour = 0.0;
};

nlohmann::json ToJson(const ComplexityReport& report);

// Mean over (output, feature) of the population std of the Jacobian entry
// across instances. Throws kTooFewInstances below two instances.
double NonLinearity(const AttributionTensor& gradient);
// Mean |difference| over horizontally and vertically adjacent cells, pairs
// taken within each block only. Throws kEmptyTensor.
double NonHomogeneity(const HeatmapGrid& grid);
// Cells strictly above `threshold`, divided by 24.
double ImportantVariablesPerHour(const HeatmapGrid& grid, double threshold = kImportanceThreshold);

ComplexityReport ComplexityMetrics(const AttributionTensor& gradient, const HeatmapGrid& shap_heatmap,
                                   double threshold = kImportanceThreshold);

}  // namespace epfx

#endif  // EPFX_COMPLEXITY_H_
