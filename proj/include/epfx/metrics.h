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

#ifndef EPFX_METRICS_H_
#define EPFX_METRICS_H_

#include <vector>

#include <Eigen/Dense>

#include "epfx/series.h"
#include "json.hpp"

namespace epfx {

// Forecast accuracy in price units; smape and rmae are ratios.
struct PerformanceReport {
  double mae = 0.0;
  double rmae = 0.0;
  double smape = 0.0;
  double rmse = 0.0;
};

nlohmann::json ToJson(const PerformanceReport& report);

// All three blocks must share a shape. rmae = mae / mae(naive). Throws
// kLengthMismatch or kZeroNaiveError.
PerformanceReport PerformanceMetrics(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& actual,
                                     const Eigen::MatrixXd& naive);

// Yesterday's price at the same hour.
struct NaiveForecast {
  std::vector<Date> dates;
  Eigen::MatrixXd predicted;  // days x 24
  Eigen::MatrixXd actual;     // days x 24
};

// Every day D of the series for which D and D-1 are complete. Throws
// kInsufficientHistory.
NaiveForecast NaiveForecastFor(const HourlySeries& series);
// Predictions for the given days only.
Eigen::MatrixXd NaiveForecastFor(const HourlySeries& series, const std::vector<Date>& dates);

}  // namespace epfx

#endif  // EPFX_METRICS_H_
