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

#include "epfx/heatmap.h"

#include <cmath>

#include "epfx/error.h"

namespace epfx {

std::string_view HeatmapAggregationName(HeatmapAggregation aggregation) {
  switch (aggregation) {
    case HeatmapAggregation::kMeanAbs: return "mean_abs";
    case HeatmapAggregation::kMean: return "mean";
    case HeatmapAggregation::kSingleInstance: return "instance";
  }
  return "?";
}

int HeatmapGrid::CellCount() const {
  int count = 0;
  for (const auto& block : blocks) count += static_cast<int>(block.cells.size());
  return count;
}

HeatmapGrid Heatmap(const AttributionTensor& tensor, HeatmapAggregation aggregation, int instance) {
  const int n = tensor.instances();
  if (n == 0) throw Error(ErrorCode::kEmptyTensor, "attribution tensor has no instances");
  if (aggregation == HeatmapAggregation::kSingleInstance && (instance < 0 || instance >= n)) {
    throw Error(ErrorCode::kInvalidArgument, "instance index out of range");
  }

  HeatmapGrid grid;
  grid.kind = tensor.kind;
  grid.aggregation = aggregation;
  if (aggregation == HeatmapAggregation::kSingleInstance) grid.instance_id = tensor.instance_ids[instance];

  // Column of the tensor for (block, input hour).
  std::vector<std::vector<int>> columns;
  for (int f = 0; f < tensor.num_features(); ++f) {
    const FeatureId& id = tensor.features[f];
    if (!id.IsHourly()) continue;
    size_t b = 0;
    while (b < grid.blocks.size() && grid.blocks[b].label != id.group) ++b;
    if (b == grid.blocks.size()) {
      grid.blocks.push_back({id.group, Eigen::MatrixXd::Zero(tensor.outputs, kHoursPerDay)});
      columns.emplace_back(kHoursPerDay, -1);
    }
    columns[b][id.hour] = f;
  }
  for (size_t b = 0; b < grid.blocks.size(); ++b) {
    for (int h = 0; h < kHoursPerDay; ++h) {
      if (columns[b][h] < 0) {
        throw Error(ErrorCode::kNotHourlyGroup,
                    "super-variable '" + grid.blocks[b].label + "' lacks hour " + std::to_string(h));
      }
    }
  }

  for (size_t b = 0; b < grid.blocks.size(); ++b) {
    Eigen::MatrixXd& cells = grid.blocks[b].cells;
    for (int o = 0; o < tensor.outputs; ++o) {
      for (int h = 0; h < kHoursPerDay; ++h) {
        const int f = columns[b][h];
        if (aggregation == HeatmapAggregation::kSingleInstance) {
          cells(o, h) = tensor.at(instance, o, f);
          continue;
        }
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
          const double v = tensor.at(i, o, f);
          sum += aggregation == HeatmapAggregation::kMeanAbs ? std::abs(v) : v;
        }
        cells(o, h) = sum / n;
      }
    }
  }
  return grid;
}

Eigen::MatrixXd HourlyImportance(const SshapTensor& sshap) {
  const int n = sshap.instances();
  if (n == 0) throw Error(ErrorCode::kEmptyTensor, "SSHAP tensor has no instances");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(sshap.outputs, sshap.num_groups());
  for (int i = 0; i < n; ++i) {
    for (int o = 0; o < sshap.outputs; ++o) {
      for (int g = 0; g < sshap.num_groups(); ++g) out(o, g) += std::abs(sshap.at(i, o, g));
    }
  }
  return out / n;
}

}  // namespace epfx
