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

#include "epfx/features.h"

#include "epfx/error.h"

namespace epfx {

std::string FeatureId::Name() const {
  if (!IsHourly()) return group;
  return group + " H" + std::to_string(hour);
}

std::vector<FeatureId> FeatureLayout(const MarketConfig& config) {
  std::vector<FeatureId> layout;
  layout.reserve(config.FeatureCount());
  for (const auto& sv : config.super_variables) {
    for (int h = 0; h < kHoursPerDay; ++h) layout.push_back({sv.label, h});
  }
  if (config.include_day_of_week) layout.push_back({std::string(kDayOfWeekLabel), -1});
  return layout;
}

FeatureMatrix BuildFeatureMatrix(const HourlySeries& series, const MarketConfig& config) {
  config.Validate();
  FeatureMatrix out;
  out.columns = FeatureLayout(config);
  if (series.size() == 0) {
    throw Error(ErrorCode::kInsufficientHistory, "empty series");
  }

  const Timestamp start = series.timestamps.front();
  const Date first_day = std::chrono::floor<std::chrono::days>(start);
  const long long start_offset = (start - Timestamp(first_day)).count() / 3600;
  const long long n = static_cast<long long>(series.size());
  // Position of (day, hour) in the contiguous hourly series.
  auto index_of = [&](Date day, int hour) {
    return (day - first_day).count() * 24LL + hour - start_offset;
  };
  const Date last_day = std::chrono::floor<std::chrono::days>(series.timestamps.back());
  const int max_lag = config.MaxLag();

  for (Date day = first_day; day <= last_day; day += std::chrono::days(1)) {
    if (index_of(day - std::chrono::days(max_lag), 0) < 0 || index_of(day, 23) >= n) continue;
    out.dates.push_back(day);
  }
  if (out.dates.empty()) {
    throw Error(ErrorCode::kInsufficientHistory,
                "series of " + std::to_string(n) + " hours cannot cover a lag of " +
                    std::to_string(max_lag) + " days plus one target day");
  }

  const int rows = static_cast<int>(out.dates.size());
  out.values.resize(rows, config.FeatureCount());
  out.targets.resize(rows, kHoursPerDay);
  for (int r = 0; r < rows; ++r) {
    const Date day = out.dates[r];
    int col = 0;
    for (const auto& sv : config.super_variables) {
      const auto& source = series.column(sv.source);
      const Date lagged = day - std::chrono::days(sv.day_lag);
      for (int h = 0; h < kHoursPerDay; ++h) out.values(r, col++) = source[index_of(lagged, h)];
    }
    if (config.include_day_of_week) {
      // Monday = 0.
      out.values(r, col++) = static_cast<double>(std::chrono::weekday(day).iso_encoding() - 1);
    }
    for (int h = 0; h < kHoursPerDay; ++h) out.targets(r, h) = series.price[index_of(day, h)];
  }
  return out;
}

FeatureMatrix SliceRows(const FeatureMatrix& matrix, int begin, int end) {
  std::vector<int> rows;
  for (int r = begin; r < end; ++r) rows.push_back(r);
  return SelectRows(matrix, rows);
}

FeatureMatrix SelectRows(const FeatureMatrix& matrix, const std::vector<int>& rows) {
  FeatureMatrix out;
  out.columns = matrix.columns;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), matrix.values.cols());
  out.targets.resize(static_cast<Eigen::Index>(rows.size()), matrix.targets.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    const int r = rows[i];
    if (r < 0 || r >= matrix.rows()) {
      throw Error(ErrorCode::kInvalidArgument, "row index out of range");
    }
    out.dates.push_back(matrix.dates[r]);
    out.values.row(static_cast<Eigen::Index>(i)) = matrix.values.row(r);
    out.targets.row(static_cast<Eigen::Index>(i)) = matrix.targets.row(r);
  }
  return out;
}

}  // namespace epfx
