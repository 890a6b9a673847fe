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

#ifndef EPFX_RENDER_H_
#define EPFX_RENDER_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "epfx/beeswarm.h"
#include "epfx/heatmap.h"
#include "epfx/sshap.h"
#include "epfx/sshap_line.h"

namespace epfx {

// Significant digits used for plotted numbers, both in the CSV and in the
// SVG data-value attributes, so the two agree textually.
inline constexpr int kFigureDigits = 10;

std::string FigureNumber(double value);

// SVG document plus the CSV of the numbers it plots.
struct Figure {
  std::string svg;
  std::string csv;
};

// `unit` labels values, e.g. "EUR/MWh".
Figure RenderHeatmap(const HeatmapGrid& grid, std::string_view title, std::string_view unit);
Figure RenderLines(const std::vector<SshapLine>& lines, std::string_view title,
                   std::string_view unit);
// `importance` is outputs x groups.
Figure RenderHourlyImportance(const Eigen::MatrixXd& importance,
                              const std::vector<std::string>& labels, std::string_view title,
                              std::string_view unit);
Figure RenderBeeswarm(const std::vector<BeeswarmRow>& rows, std::string_view title,
                      std::string_view unit);
// Per-hour stacked group contributions of one instance next to
// prediction - baseline.
Figure RenderInstanceStack(const SshapTensor& sshap, int instance, std::string_view title,
                           std::string_view unit);

}  // namespace epfx

#endif  // EPFX_RENDER_H_
