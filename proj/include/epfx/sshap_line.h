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

#ifndef EPFX_SSHAP_LINE_H_
#define EPFX_SSHAP_LINE_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epfx/sshap.h"

namespace epfx {

// How SSHAP values are paired with actual prices.
enum class LineMode {
  kPooled,     // one point per (instance, output hour)
  kHour,       // one point per instance, a single output hour
  kDailyMean,  // one point per instance, both sides averaged over the day
};

struct LineObservations {
  std::vector<double> price;
  std::vector<double> value;
};

// `actual` is instances x outputs, aligned with the tensor's instances.
LineObservations CollectObservations(const SshapTensor& sshap, int group,
                                     const Eigen::MatrixXd& actual, LineMode mode, int hour = 0);

// Nadaraya-Watson regression of SSHAP value on actual price with a Gaussian
// kernel.
struct SshapLine {
  std::string group;
  std::vector<double> grid;                  // strictly ascending prices
  std::vector<std::optional<double>> curve;  // empty where all weights vanish
  double bandwidth = 5.0;
};

SshapLine SmoothLine(std::string group, const LineObservations& observations,
                     const std::vector<double>& grid, double bandwidth);

// Linear-interpolated percentile, q in [0, 100].
double Percentile(std::vector<double> values, double q);
std::vector<double> EvenGrid(double lo, double hi, int size);

struct LineOptions {
  double bandwidth = 5.0;
  int grid_size = 200;
  double grid_low_percentile = 1.0;
  double grid_high_percentile = 99.0;
  LineMode mode = LineMode::kPooled;
  int hour = 0;
};

// Grid spanning the configured percentiles of the prices the mode uses.
std::vector<double> LineGrid(const Eigen::MatrixXd& actual, const LineOptions& options);

// One line per group of the tensor's partition, all on the same grid.
std::vector<SshapLine> SshapLines(const SshapTensor& sshap, const Eigen::MatrixXd& actual,
                                  const LineOptions& options);
std::vector<SshapLine> SshapLines(const SshapTensor& sshap, const Eigen::MatrixXd& actual,
                                  const LineOptions& options, const std::vector<double>& grid);

struct SlopeCheckResult {
  double slope = 0.0;
  double intercept = 0.0;
  // max |S(g) - (g - baseline)| over the band, S being the sum of the lines.
  double max_deviation = 0.0;
  int points = 0;
};

// Least-squares line through (g, S(g)) for grid points in [band_low,
// band_high] where every line is defined. Throws kGridMismatch or kEmptyData.
SlopeCheckResult SlopeCheck(const std::vector<SshapLine>& lines, double baseline, double band_low,
                            double band_high);

}  // namespace epfx

#endif  // EPFX_SSHAP_LINE_H_
