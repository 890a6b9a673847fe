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

#include "epfx/metrics.h"

#include <cmath>
#include <map>

#include "epfx/error.h"
#include "epfx/features.h"

namespace epfx {
namespace {

double Mae(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().sum() / static_cast<double>(a.size());
}

// Maps each day of the series to the index of its hour 0, if complete.
std::map<Date, size_t> CompleteDays(const HourlySeries& series) {
  std::map<Date, size_t> days;
  for (size_t i = 0; i + kHoursPerDay <= series.size(); ++i) {
    const Date day = std::chrono::floor<std::chrono::days>(series.timestamps[i]);
    if (series.timestamps[i] != Timestamp(day)) continue;
    if (series.timestamps[i + kHoursPerDay - 1] == Timestamp(day) + std::chrono::hours(23)) {
      days.emplace(day, i);
    }
  }
  return days;
}

}  // namespace

nlohmann::json ToJson(const PerformanceReport& report) {
  return {{"mae", report.mae}, {"rmae", report.rmae}, {"smape", report.smape}, {"rmse", report.rmse}};
}

PerformanceReport PerformanceMetrics(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual,
                                     const Eigen::MatrixXd& naive) {
  if (predicted.size() == 0 || predicted.rows() != actual.rows() ||
      predicted.cols() != actual.cols() || naive.rows() != actual.rows() ||
      naive.cols() != actual.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "predicted, actual and naive blocks must share a non-empty shape");
  }
  PerformanceReport report;
  report.mae = Mae(predicted, actual);
  report.rmse = std::sqrt((predicted - actual).squaredNorm() / static_cast<double>(actual.size()));
  double smape = 0.0;
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    const double denom = std::abs(predicted(i)) + std::abs(actual(i));
    if (denom > 0.0) smape += 2.0 * std::abs(predicted(i) - actual(i)) / denom;
  }
  report.smape = smape / static_cast<double>(actual.size());
  const double naive_mae = Mae(naive, actual);
  if (naive_mae == 0.0) throw Error(ErrorCode::kZeroNaiveError, "naive forecast has zero MAE");
  report.rmae = report.mae / naive_mae;
  return report;
}

NaiveForecast NaiveForecastFor(const HourlySeries& series) {
  const auto days = CompleteDays(series);
  NaiveForecast out;
  for (const auto& [day, start] : days) {
    if (days.count(day - std::chrono::days(1))) out.dates.push_back(day);
  }
  if (out.dates.empty()) {
    throw Error(ErrorCode::kInsufficientHistory, "naive forecast needs two consecutive complete days");
  }
  out.predicted = NaiveForecastFor(series, out.dates);
  out.actual.resize(static_cast<Eigen::Index>(out.dates.size()), kHoursPerDay);
  for (size_t d = 0; d < out.dates.size(); ++d) {
    const size_t start = days.at(out.dates[d]);
    for (int h = 0; h < kHoursPerDay; ++h) out.actual(static_cast<Eigen::Index>(d), h) = series.price[start + h];
  }
  return out;
}

Eigen::MatrixXd NaiveForecastFor(const HourlySeries& series, const std::vector<Date>& dates) {
  const auto days = CompleteDays(series);
  Eigen::MatrixXd predicted(static_cast<Eigen::Index>(dates.size()), kHoursPerDay);
  for (size_t d = 0; d < dates.size(); ++d) {
    auto it = days.find(dates[d] - std::chrono::days(1));
    if (it == days.end()) {
      throw Error(ErrorCode::kInsufficientHistory, "no complete previous day for " + FormatDate(dates[d]));
    }
    for (int h = 0; h < kHoursPerDay; ++h) {
      predicted(static_cast<Eigen::Index>(d), h) = series.price[it->second + h];
    }
  }
  return predicted;
}

}  // namespace epfx
