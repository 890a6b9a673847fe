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

#include "epfx/sshap_line.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epfx/error.h"

namespace epfx {
namespace {

std::vector<double> ModePrices(const Eigen::MatrixXd& actual, const LineOptions& options) {
  std::vector<double> prices;
  switch (options.mode) {
    case LineMode::kPooled:
      prices.assign(actual.data(), actual.data() + actual.size());
      break;
    case LineMode::kHour:
      for (Eigen::Index i = 0; i < actual.rows(); ++i) prices.push_back(actual(i, options.hour));
      break;
    case LineMode::kDailyMean:
      for (Eigen::Index i = 0; i < actual.rows(); ++i) prices.push_back(actual.row(i).mean());
      break;
  }
  return prices;
}

}  // namespace

LineObservations CollectObservations(const SshapTensor& sshap, int group,
                                     const Eigen::MatrixXd& actual, LineMode mode, int hour) {
  if (actual.rows() != sshap.instances() || actual.cols() != sshap.outputs) {
    throw Error(ErrorCode::kLengthMismatch, "actual prices do not match the SSHAP tensor");
  }
  if (group < 0 || group >= sshap.num_groups()) {
    throw Error(ErrorCode::kUnknownGroup, "group index out of range");
  }
  if (mode == LineMode::kHour && (hour < 0 || hour >= sshap.outputs)) {
    throw Error(ErrorCode::kInvalidArgument, "output hour out of range");
  }
  LineObservations obs;
  for (int i = 0; i < sshap.instances(); ++i) {
    switch (mode) {
      case LineMode::kPooled:
        for (int o = 0; o < sshap.outputs; ++o) {
          obs.price.push_back(actual(i, o));
          obs.value.push_back(sshap.at(i, o, group));
        }
        break;
      case LineMode::kHour:
        obs.price.push_back(actual(i, hour));
        obs.value.push_back(sshap.at(i, hour, group));
        break;
      case LineMode::kDailyMean: {
        double value = 0.0;
        for (int o = 0; o < sshap.outputs; ++o) value += sshap.at(i, o, group);
        obs.price.push_back(actual.row(i).mean());
        obs.value.push_back(value / sshap.outputs);
        break;
      }
    }
  }
  return obs;
}

SshapLine SmoothLine(std::string group, const LineObservations& observations,
                     const std::vector<double>& grid, double bandwidth) {
  if (observations.price.empty()) throw Error(ErrorCode::kEmptyData, "no observations for '" + group + "'");
  if (observations.price.size() != observations.value.size()) {
    throw Error(ErrorCode::kLengthMismatch, "price and value counts differ");
  }
  if (!(bandwidth > 0.0)) throw Error(ErrorCode::kInvalidArgument, "bandwidth must be > 0");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::kInvalidArgument, "grid must be strictly ascending");
  }
  SshapLine line;
  line.group = std::move(group);
  line.grid = grid;
  line.bandwidth = bandwidth;
  line.curve.reserve(grid.size());
  const double inv_bw = 1.0 / bandwidth;
  for (double g : grid) {
    double weight_sum = 0.0;
    double weighted = 0.0;
    for (size_t k = 0; k < observations.price.size(); ++k) {
      const double u = (g - observations.price[k]) * inv_bw;
      const double w = std::exp(-0.5 * u * u);
      weight_sum += w;
      weighted += w * observations.value[k];
    }
    if (weight_sum > 0.0) {
      line.curve.emplace_back(weighted / weight_sum);
    } else {
      line.curve.emplace_back(std::nullopt);
    }
  }
  return line;
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyData, "percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<double> EvenGrid(double lo, double hi, int size) {
  if (size < 2 || !(hi > lo)) throw Error(ErrorCode::kInvalidArgument, "grid needs size >= 2 and hi > lo");
  std::vector<double> grid(size);
  for (int i = 0; i < size; ++i) grid[i] = lo + (hi - lo) * i / (size - 1);
  return grid;
}

std::vector<double> LineGrid(const Eigen::MatrixXd& actual, const LineOptions& options) {
  const std::vector<double> prices = ModePrices(actual, options);
  const double lo = Percentile(prices, options.grid_low_percentile);
  double hi = Percentile(prices, options.grid_high_percentile);
  if (!(hi > lo)) hi = lo + 1.0;
  return EvenGrid(lo, hi, options.grid_size);
}

std::vector<SshapLine> SshapLines(const SshapTensor& sshap, const Eigen::MatrixXd& actual,
                                  const LineOptions& options, const std::vector<double>& grid) {
  std::vector<SshapLine> lines;
  for (int g = 0; g < sshap.num_groups(); ++g) {
    lines.push_back(SmoothLine(sshap.partition.groups()[g].label,
                               CollectObservations(sshap, g, actual, options.mode, options.hour),
                               grid, options.bandwidth));
  }
  return lines;
}

std::vector<SshapLine> SshapLines(const SshapTensor& sshap, const Eigen::MatrixXd& actual,
                                  const LineOptions& options) {
  if (sshap.instances() == 0) throw Error(ErrorCode::kEmptyData, "SSHAP tensor has no instances");
  return SshapLines(sshap, actual, options, LineGrid(actual, options));
}

SlopeCheckResult SlopeCheck(const std::vector<SshapLine>& lines, double baseline, double band_low,
                            double band_high) {
  if (lines.empty()) throw Error(ErrorCode::kEmptyData, "no lines to check");
  const auto& grid = lines.front().grid;
  for (const auto& line : lines) {
    if (line.grid != grid || line.curve.size() != grid.size()) {
      throw Error(ErrorCode::kGridMismatch, "line '" + line.group + "' uses a different grid");
    }
  }
  std::vector<double> xs, ys;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < band_low || grid[i] > band_high) continue;
    double total = 0.0;
    bool defined = true;
    for (const auto& line : lines) {
      if (!line.curve[i]) {
        defined = false;
        break;
      }
      total += *line.curve[i];
    }
    if (!defined) continue;
    xs.push_back(grid[i]);
    ys.push_back(total);
  }
  if (xs.size() < 2) throw Error(ErrorCode::kEmptyData, "fewer than two grid points in the band");

  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  SlopeCheckResult result;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    result.max_deviation = std::max(result.max_deviation, std::abs(ys[i] - (xs[i] - baseline)));
  }
  result.slope = sxy / sxx;
  result.intercept = mean_y - result.slope * mean_x;
  result.points = static_cast<int>(xs.size());
  return result;
}

}  // namespace epfx
