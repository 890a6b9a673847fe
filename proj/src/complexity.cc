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

#include "epfx/complexity.h"

#include <cmath>

#include "epfx/error.h"

namespace epfx {

nlohmann::json ToJson(const ComplexityReport& report) {
  return {{"non_linearity", report.non_linearity},
          {"non_homogeneity", report.non_homogeneity},
          {"important_vars_per_hour", report.important_vars_per_hour}};
}

double NonLinearity(const AttributionTensor& gradient) {
  const int n = gradient.instances();
  if (n < 2) throw Error(ErrorCode::kTooFewInstances, "non-linearity needs at least two instances");
  const size_t cells = static_cast<size_t>(gradient.outputs) * gradient.features.size();
  if (cells == 0) throw Error(ErrorCode::kEmptyTensor, "gradient tensor has no entries");
  // Welford updates keep the spread exactly zero when every instance agrees.
  std::vector<double> mean(cells, 0.0);
  std::vector<double> m2(cells, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = gradient.values.data() + gradient.Offset(i, 0, 0);
    for (size_t c = 0; c < cells; ++c) {
      const double delta = row[c] - mean[c];
      mean[c] += delta / (i + 1);
      m2[c] += delta * (row[c] - mean[c]);
    }
  }
  double total = 0.0;
  for (size_t c = 0; c < cells; ++c) total += std::sqrt(std::max(m2[c], 0.0) / n);
  return total / static_cast<double>(cells);
}

double NonHomogeneity(const HeatmapGrid& grid) {
  double total = 0.0;
  long pairs = 0;
  for (const auto& block : grid.blocks) {
    const Eigen::MatrixXd& c = block.cells;
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
      for (Eigen::Index k = 0; k < c.cols(); ++k) {
        if (k + 1 < c.cols()) {
          total += std::abs(c(r, k + 1) - c(r, k));
          ++pairs;
        }
        if (r + 1 < c.rows()) {
          total += std::abs(c(r + 1, k) - c(r, k));
          ++pairs;
        }
      }
    }
  }
  if (pairs == 0) throw Error(ErrorCode::kEmptyTensor, "heatmap has no neighbouring cells");
  return total / static_cast<double>(pairs);
}

double ImportantVariablesPerHour(const HeatmapGrid& grid, double threshold) {
  long count = 0;
  for (const auto& block : grid.blocks) count += (block.cells.array() > threshold).count();
  return static_cast<double>(count) / kHoursPerDay;
}

ComplexityReport ComplexityMetrics(const AttributionTensor& gradient, const HeatmapGrid& shap_heatmap,
                                   double threshold) {
  ComplexityReport report;
  report.non_linearity = NonLinearity(gradient);
  report.non_homogeneity = NonHomogeneity(shap_heatmap);
  report.important_vars_per_hour = ImportantVariablesPerHour(shap_heatmap, threshold);
  return report;
}

}  // namespace epfx
