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

#include "epfx/render.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "epfx/error.h"
#include "epfx/svg.h"
#include "epfx/text.h"

namespace epfx {
namespace {

constexpr double kMargin = 60.0;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double pixel_lo = 0.0;
  double pixel_hi = 1.0;

  double Map(double v) const { return pixel_lo + (v - lo) / (hi - lo) * (pixel_hi - pixel_lo); }
};

Axis MakeAxis(double lo, double hi, double pixel_lo, double pixel_hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) lo = 0.0, hi = 1.0;
  if (hi <= lo) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, pixel_lo, pixel_hi};
}

void DrawFrame(SvgDocument& svg, const Axis& x, const Axis& y, std::string_view x_title,
               std::string_view y_title) {
  svg.Line(x.pixel_lo, y.pixel_lo, x.pixel_hi, y.pixel_lo, "#000000");
  svg.Line(x.pixel_lo, y.pixel_lo, x.pixel_lo, y.pixel_hi, "#000000");
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double vx = x.lo + (x.hi - x.lo) * t / kTicks;
    const double px = x.Map(vx);
    svg.Line(px, y.pixel_lo, px, y.pixel_lo + 4, "#000000");
    svg.Text(px, y.pixel_lo + 16, FormatNumber(vx, 4), 10, "middle");
    const double vy = y.lo + (y.hi - y.lo) * t / kTicks;
    const double py = y.Map(vy);
    svg.Line(x.pixel_lo - 4, py, x.pixel_lo, py, "#000000");
    svg.Text(x.pixel_lo - 6, py + 3, FormatNumber(vy, 4), 10, "end");
  }
  svg.Text((x.pixel_lo + x.pixel_hi) / 2, y.pixel_lo + 34, x_title, 12, "middle");
  svg.Text(x.pixel_lo - 44, (y.pixel_lo + y.pixel_hi) / 2, y_title, 12, "middle", true);
}

void DrawLegend(SvgDocument& svg, double x, double y, const std::vector<std::string>& labels) {
  for (size_t i = 0; i < labels.size(); ++i) {
    const double row = y + 16.0 * static_cast<double>(i);
    svg.Rect(x, row - 9, 10, 10, CategoricalColor(static_cast<int>(i)));
    svg.Text(x + 14, row, labels[i], 10);
  }
}

std::string Unit(std::string_view prefix, std::string_view unit) {
  return std::string(prefix) + " (" + std::string(unit) + ")";
}

}  // namespace

std::string FigureNumber(double value) { return FormatNumber(value, kFigureDigits); }

Figure RenderHeatmap(const HeatmapGrid& grid, std::string_view title, std::string_view unit) {
  const bool sequential = grid.aggregation == HeatmapAggregation::kMeanAbs;
  double extent = 0.0;
  for (const auto& block : grid.blocks) {
    if (block.cells.size()) extent = std::max(extent, block.cells.cwiseAbs().maxCoeff());
  }
  if (extent == 0.0) extent = 1.0;
  const double scale_min = sequential ? 0.0 : -extent;
  const double scale_max = extent;

  constexpr double kCell = 6.0;
  constexpr double kGap = 36.0;
  constexpr int kPerRow = 5;
  const int n = static_cast<int>(grid.blocks.size());
  const int cols = std::max(1, std::min(n, kPerRow));
  const int rows = std::max(1, (n + kPerRow - 1) / kPerRow);
  const double block_px = kCell * kHoursPerDay;
  const double width = kMargin + cols * (block_px + kGap) + 120;
  const double height = kMargin + rows * (block_px + kGap + 20) + 20;

  SvgDocument svg(width, height);
  svg.Text(width / 2, 24, title, 14, "middle");
  std::ostringstream csv;
  csv << "block,output_hour,input_hour,value,scale_min,scale_max\n";
  for (int b = 0; b < n; ++b) {
    const HeatmapBlock& block = grid.blocks[b];
    const double x0 = kMargin + (b % kPerRow) * (block_px + kGap);
    const double y0 = kMargin + (b / kPerRow) * (block_px + kGap + 20);
    svg.BeginGroup(block.label);
    svg.Text(x0 + block_px / 2, y0 - 6, block.label, 10, "middle");
    for (Eigen::Index o = 0; o < block.cells.rows(); ++o) {
      for (Eigen::Index h = 0; h < block.cells.cols(); ++h) {
        const double v = block.cells(o, h);
        const double t = (v - scale_min) / (scale_max - scale_min);
        const std::string text = FigureNumber(v);
        svg.Rect(x0 + h * kCell, y0 + o * kCell, kCell, kCell,
                 sequential ? SequentialColor(t) : DivergingColor(t), text);
        csv << CsvField(block.label) << ',' << o << ',' << h << ',' << text << ','
            << FigureNumber(scale_min) << ',' << FigureNumber(scale_max) << '\n';
      }
    }
    svg.Text(x0 + block_px / 2, y0 + block_px + 14, "input hour", 9, "middle");
    svg.Text(x0 - 6, y0 + block_px / 2, "output hour", 9, "middle", true);
    svg.EndGroup();
  }
  // Colour bar.
  const double bar_x = width - 90;
  for (int s = 0; s < 20; ++s) {
    const double t = 1.0 - s / 19.0;
    svg.Rect(bar_x, kMargin + s * 6.0, 12, 6, sequential ? SequentialColor(t) : DivergingColor(t));
  }
  svg.Text(bar_x + 16, kMargin + 6, FormatNumber(scale_max, 4), 9);
  svg.Text(bar_x + 16, kMargin + 120, FormatNumber(scale_min, 4), 9);
  svg.Text(bar_x, kMargin + 136, std::string(unit), 9);
  return {svg.str(), csv.str()};
}

Figure RenderLines(const std::vector<SshapLine>& lines, std::string_view title,
                   std::string_view unit) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& line : lines) {
    for (size_t g = 0; g < line.grid.size(); ++g) {
      x_lo = std::min(x_lo, line.grid[g]);
      x_hi = std::max(x_hi, line.grid[g]);
      if (line.curve[g]) {
        y_lo = std::min(y_lo, *line.curve[g]);
        y_hi = std::max(y_hi, *line.curve[g]);
      }
    }
  }
  constexpr double kWidth = 760, kHeight = 420;
  const Axis x = MakeAxis(x_lo, x_hi, kMargin, kWidth - 200);
  const Axis y = MakeAxis(y_lo, y_hi, kHeight - kMargin, 40);
  SvgDocument svg(kWidth, kHeight);
  svg.Text(kWidth / 2, 24, title, 14, "middle");
  DrawFrame(svg, x, y, Unit("actual price", unit), Unit("SSHAP", unit));
  if (y.lo < 0 && y.hi > 0) svg.Line(x.pixel_lo, y.Map(0), x.pixel_hi, y.Map(0), "#999999", 0.5);

  std::ostringstream csv;
  csv << "group,grid_price,value\n";
  std::vector<std::string> labels;
  for (size_t l = 0; l < lines.size(); ++l) {
    const SshapLine& line = lines[l];
    labels.push_back(line.group);
    svg.BeginGroup(line.group);
    std::vector<std::pair<double, double>> points;
    std::string values;
    auto flush = [&] {
      if (!points.empty()) svg.Polyline(points, CategoricalColor(static_cast<int>(l)), values);
      points.clear();
      values.clear();
    };
    for (size_t g = 0; g < line.grid.size(); ++g) {
      csv << CsvField(line.group) << ',' << FigureNumber(line.grid[g]) << ',';
      if (!line.curve[g]) {
        csv << '\n';
        flush();
        continue;
      }
      const std::string text = FigureNumber(*line.curve[g]);
      csv << text << '\n';
      points.emplace_back(x.Map(line.grid[g]), y.Map(*line.curve[g]));
      if (!values.empty()) values += ' ';
      values += text;
    }
    flush();
    svg.EndGroup();
  }
  DrawLegend(svg, kWidth - 190, 60, labels);
  return {svg.str(), csv.str()};
}

Figure RenderHourlyImportance(const Eigen::MatrixXd& importance,
                              const std::vector<std::string>& labels, std::string_view title,
                              std::string_view unit) {
  if (static_cast<size_t>(importance.cols()) != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one label per importance column is required");
  }
  constexpr double kWidth = 760, kHeight = 420;
  const double y_hi = importance.size() ? importance.maxCoeff() : 1.0;
  const Axis x = MakeAxis(0, std::max<double>(1, importance.rows() - 1), kMargin, kWidth - 200);
  const Axis y = MakeAxis(0, y_hi, kHeight - kMargin, 40);
  SvgDocument svg(kWidth, kHeight);
  svg.Text(kWidth / 2, 24, title, 14, "middle");
  DrawFrame(svg, x, y, "output hour", Unit("mean |SSHAP|", unit));
  std::ostringstream csv;
  csv << "output_hour,group,value\n";
  for (Eigen::Index g = 0; g < importance.cols(); ++g) {
    svg.BeginGroup(labels[g]);
    std::vector<std::pair<double, double>> points;
    std::string values;
    for (Eigen::Index h = 0; h < importance.rows(); ++h) {
      const std::string text = FigureNumber(importance(h, g));
      points.emplace_back(x.Map(static_cast<double>(h)), y.Map(importance(h, g)));
      if (!values.empty()) values += ' ';
      values += text;
    }
    svg.Polyline(points, CategoricalColor(static_cast<int>(g)), values);
    svg.EndGroup();
  }
  for (Eigen::Index h = 0; h < importance.rows(); ++h) {
    for (Eigen::Index g = 0; g < importance.cols(); ++g) {
      csv << h << ',' << CsvField(labels[g]) << ',' << FigureNumber(importance(h, g)) << '\n';
    }
  }
  DrawLegend(svg, kWidth - 190, 60, labels);
  return {svg.str(), csv.str()};
}

Figure RenderBeeswarm(const std::vector<BeeswarmRow>& rows, std::string_view title,
                      std::string_view unit) {
  double lo = 0.0, hi = 0.0;
  for (const auto& row : rows) {
    for (const auto& p : row.points) {
      lo = std::min(lo, p.shap_value);
      hi = std::max(hi, p.shap_value);
    }
  }
  constexpr double kRowHeight = 28.0;
  constexpr double kWidth = 760;
  const double height = 2 * kMargin + kRowHeight * std::max<size_t>(rows.size(), 1) + 20;
  const Axis x = MakeAxis(lo, hi, 200, kWidth - 40);
  SvgDocument svg(kWidth, height);
  svg.Text(kWidth / 2, 24, title, 14, "middle");
  const double axis_y = height - kMargin;
  svg.Line(x.pixel_lo, axis_y, x.pixel_hi, axis_y, "#000000");
  for (int t = 0; t <= 5; ++t) {
    const double v = x.lo + (x.hi - x.lo) * t / 5;
    svg.Text(x.Map(v), axis_y + 16, FormatNumber(v, 4), 10, "middle");
  }
  svg.Text((x.pixel_lo + x.pixel_hi) / 2, axis_y + 34, Unit("SHAP value, hour average", unit),
           12, "middle");
  if (x.lo < 0 && x.hi > 0) svg.Line(x.Map(0), kMargin - 10, x.Map(0), axis_y, "#999999", 0.5);

  std::ostringstream csv;
  csv << "rank,feature,mean_abs_shap,instance_id,feature_value,shap_value\n";
  for (size_t r = 0; r < rows.size(); ++r) {
    const BeeswarmRow& row = rows[r];
    const double cy = kMargin + kRowHeight * (static_cast<double>(r) + 0.5);
    const std::string name = row.feature.Name();
    svg.BeginGroup(name);
    svg.Text(190, cy + 3, name + " [" + FormatNumber(row.mean_abs_shap, 4) + "]", 10, "end");
    double f_lo = std::numeric_limits<double>::infinity(), f_hi = -f_lo;
    for (const auto& p : row.points) {
      f_lo = std::min(f_lo, p.feature_value);
      f_hi = std::max(f_hi, p.feature_value);
    }
    for (size_t i = 0; i < row.points.size(); ++i) {
      const BeeswarmPoint& p = row.points[i];
      const double t = f_hi > f_lo ? (p.feature_value - f_lo) / (f_hi - f_lo) : 0.5;
      // Deterministic vertical jitter from the point index.
      const double jitter = (static_cast<double>((i * 2654435761u) % 1000) / 1000.0 - 0.5) *
                            (kRowHeight * 0.7);
      const std::string text = FigureNumber(p.shap_value);
      svg.Circle(x.Map(p.shap_value), cy + jitter, 2.0, DivergingColor(t), text);
      csv << r + 1 << ',' << CsvField(name) << ',' << FigureNumber(row.mean_abs_shap) << ','
          << CsvField(p.instance_id) << ',' << FigureNumber(p.feature_value) << ',' << text
          << '\n';
    }
    svg.EndGroup();
  }
  svg.Text(kWidth - 40, 44, "colour: feature value, low (blue) to high (red)", 9, "end");
  return {svg.str(), csv.str()};
}

Figure RenderInstanceStack(const SshapTensor& sshap, int instance, std::string_view title,
                           std::string_view unit) {
  if (instance < 0 || instance >= sshap.instances()) {
    throw Error(ErrorCode::kInvalidArgument, "instance index out of range");
  }
  const Eigen::MatrixXd values = sshap.Instance(instance);  // outputs x groups
  const Eigen::VectorXd total =
      (sshap.prediction.row(instance) - sshap.baseline.row(instance)).transpose();
  double lo = 0.0, hi = 0.0;
  for (Eigen::Index o = 0; o < values.rows(); ++o) {
    double up = 0.0, down = 0.0;
    for (Eigen::Index g = 0; g < values.cols(); ++g) {
      (values(o, g) > 0 ? up : down) += values(o, g);
    }
    lo = std::min({lo, down, total(o)});
    hi = std::max({hi, up, total(o)});
  }
  constexpr double kWidth = 860, kHeight = 440;
  const Axis x = MakeAxis(-0.5, values.rows() - 0.5, kMargin, kWidth - 220);
  const Axis y = MakeAxis(lo, hi, kHeight - kMargin, 40);
  SvgDocument svg(kWidth, kHeight);
  svg.Text(kWidth / 2, 24, title, 14, "middle");
  DrawFrame(svg, x, y, "output hour", Unit("contribution to forecast - baseline", unit));
  svg.Line(x.pixel_lo, y.Map(0), x.pixel_hi, y.Map(0), "#999999", 0.5);

  std::ostringstream csv;
  csv << "output_hour,group,value,baseline,prediction,forecast_minus_baseline\n";
  const double bar = (x.pixel_hi - x.pixel_lo) / static_cast<double>(values.rows()) * 0.7;
  const std::vector<std::string> labels = sshap.partition.Labels();
  for (Eigen::Index o = 0; o < values.rows(); ++o) {
    double up = 0.0, down = 0.0;
    const double cx = x.Map(static_cast<double>(o));
    for (Eigen::Index g = 0; g < values.cols(); ++g) {
      const double v = values(o, g);
      const std::string text = FigureNumber(v);
      double& base = v > 0 ? up : down;
      const double top = y.Map(base + v);
      const double bottom = y.Map(base);
      base += v;
      svg.Rect(cx - bar / 2, std::min(top, bottom), bar, std::abs(bottom - top),
               CategoricalColor(static_cast<int>(g)), text);
      csv << o << ',' << CsvField(labels[g]) << ',' << text << ','
          << FigureNumber(sshap.baseline(instance, o)) << ','
          << FigureNumber(sshap.prediction(instance, o)) << ',' << FigureNumber(total(o)) << '\n';
    }
    svg.Circle(cx, y.Map(total(o)), 2.5, "#000000", FigureNumber(total(o)));
  }
  DrawLegend(svg, kWidth - 210, 60, labels);
  svg.Text(kWidth - 210, 60 + 16.0 * labels.size() + 6, "dot: forecast - baseline", 9);
  return {svg.str(), csv.str()};
}

}  // namespace epfx
