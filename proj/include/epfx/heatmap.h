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

#ifndef EPFX_HEATMAP_H_
#define EPFX_HEATMAP_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "epfx/explain.h"
#include "epfx/sshap.h"

namespace epfx {

enum class HeatmapAggregation { kMeanAbs, kMean, kSingleInstance };

std::string_view HeatmapAggregationName(HeatmapAggregation aggregation);

// One 24x24 table per super-variable: row = output hour, column = input hour.
struct HeatmapBlock {
  std::string label;
  Eigen::MatrixXd cells;
};

struct HeatmapGrid {
  AttributionKind kind = AttributionKind::kShap;
  HeatmapAggregation aggregation = HeatmapAggregation::kMeanAbs;
  std::string instance_id;  // kSingleInstance only
  std::vector<HeatmapBlock> blocks;

  int CellCount() const;
};

// Blocks follow the order of the hourly super-variables in the tensor's
// layout; the calendar column is left out. Throws kEmptyTensor for averaged
// maps of an empty tensor, and kNotHourlyGroup when a label lacks an hour.
HeatmapGrid Heatmap(const AttributionTensor& tensor, HeatmapAggregation aggregation,
                    int instance = 0);

// outputs x groups matrix of the mean |SSHAP| over instances.
Eigen::MatrixXd HourlyImportance(const SshapTensor& sshap);

}  // namespace epfx

#endif  // EPFX_HEATMAP_H_
