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

#ifndef EPFX_FEATURES_H_
#define EPFX_FEATURES_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epfx/market_config.h"
#include "epfx/series.h"

namespace epfx {

inline constexpr int kHoursPerDay = 24;

// Names one model input: hour `hour` of super-variable `group`. The calendar
// column has hour -1.
struct FeatureId {
  std::string group;
  int hour = -1;

  bool IsHourly() const { return hour >= 0; }
  // e.g. "Price D-1 H23".
  std::string Name() const;

  friend bool operator==(const FeatureId&, const FeatureId&) = default;
};

// One row per target day D. Values are raw (unscaled); targets hold the 24
// prices of day D.
struct FeatureMatrix {
  std::vector<Date> dates;
  std::vector<FeatureId> columns;
  Eigen::MatrixXd values;
  Eigen::MatrixXd targets;

  int rows() const { return static_cast<int>(dates.size()); }
  int cols() const { return static_cast<int>(columns.size()); }
};

std::vector<FeatureId> FeatureLayout(const MarketConfig& config);

// Feature (label, h) of row D holds the source value at hour h of day
// D - day_lag. Only days with every lag and all 24 target hours in range are
// emitted.
FeatureMatrix BuildFeatureMatrix(const HourlySeries& series, const MarketConfig& config);

// Rows [begin, end) in their original order.
FeatureMatrix SliceRows(const FeatureMatrix& matrix, int begin, int end);
FeatureMatrix SelectRows(const FeatureMatrix& matrix, const std::vector<int>& rows);

}  // namespace epfx

#endif  // EPFX_FEATURES_H_
