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

#include <chrono>
#include <cmath>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "epfx/beeswarm.h"
#include "epfx/complexity.h"
#include "epfx/error.h"
#include "epfx/features.h"
#include "epfx/heatmap.h"
#include "epfx/market_config.h"
#include "epfx/metrics.h"
#include "epfx/partition.h"
#include "epfx/random.h"
#include "epfx/render.h"
#include "epfx/series.h"
#include "epfx/sshap.h"
#include "epfx/sshap_line.h"

namespace epfx {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no epfx::Error thrown";
  return ErrorCode::kInvalidArgument;
}

std::vector<FeatureId> FrLayout() { return FeatureLayout(DefaultMarketConfig(MarketId::kFR)); }

AttributionTensor RandomTensor(const std::vector<FeatureId>& layout, int instances, uint64_t seed,
                               AttributionKind kind = AttributionKind::kShap) {
  AttributionTensor t = EmptyTensor(kind, layout, instances);
  Rng rng(seed);
  for (double& v : t.values) v = rng.Normal();
  for (int i = 0; i < instances; ++i) {
    t.instance_ids[i] = "2015-01-0" + std::to_string(i + 1);
    for (int o = 0; o < t.outputs; ++o) {
      t.baseline(i, o) = 40 + rng.Normal();
      t.prediction(i, o) = t.baseline(i, o) + t.Instance(i).row(o).sum();
    }
  }
  return t;
}

HeatmapGrid ConstantGrid(int blocks, double value) {
  HeatmapGrid g;
  for (int b = 0; b < blocks; ++b) g.blocks.push_back({"b" + std::to_string(b), Eigen::MatrixXd::Constant(24, 24, value)});
  return g;
}

// Every value of `attr`="..." in document order.
std::vector<std::string> Attributes(const std::string& svg, const std::string& attr) {
  std::vector<std::string> out;
  const std::regex re(" " + attr + "=\"([^\"]*)\"");
  for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it) out.push_back((*it)[1]);
  return out;
}

// Column `index` of every data row of a simple CSV without quoted commas.
std::vector<std::string> CsvColumn(const std::string& csv, int index) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string field;
    for (int k = 0; k <= index; ++k) std::getline(fields, field, ',');
    out.push_back(field);
  }
  return out;
}

TEST(HeatmapTest, FrenchLayoutHasFiveBlocks) {
  const HeatmapGrid g = Heatmap(RandomTensor(FrLayout(), 3, 1), HeatmapAggregation::kMeanAbs);
  ASSERT_EQ(g.blocks.size(), 5u);
  EXPECT_EQ(g.CellCount(), 2880);
  EXPECT_EQ(g.blocks[2].label, "Load Forecast D");
  for (const auto& b : g.blocks) EXPECT_GE(b.cells.minCoeff(), 0.0);
}

TEST(HeatmapTest, CellIsOutputRowInputColumn) {
  AttributionTensor t = EmptyTensor(AttributionKind::kShap, FrLayout(), 2);
  t.MutableInstance(0)(3, 24 + 7) = 1.0;
  t.MutableInstance(1)(3, 24 + 7) = -1.0;
  const HeatmapGrid abs = Heatmap(t, HeatmapAggregation::kMeanAbs);
  const HeatmapGrid mean = Heatmap(t, HeatmapAggregation::kMean);
  EXPECT_EQ(abs.blocks[1].cells(3, 7), 1.0);
  EXPECT_EQ(mean.blocks[1].cells(3, 7), 0.0);
  EXPECT_EQ(abs.blocks[1].cells.sum(), 1.0);
  const HeatmapGrid one = Heatmap(t, HeatmapAggregation::kSingleInstance, 1);
  EXPECT_EQ(one.blocks[1].cells(3, 7), -1.0);
}

TEST(HeatmapTest, SingleInstanceMeanAbsIsAbsoluteValue) {
  const AttributionTensor t = RandomTensor(FrLayout(), 1, 2);
  const HeatmapGrid g = Heatmap(t, HeatmapAggregation::kMeanAbs);
  for (int b = 0; b < 5; ++b) {
    for (int o = 0; o < 24; ++o) {
      for (int h = 0; h < 24; ++h) EXPECT_EQ(g.blocks[b].cells(o, h), std::abs(t.at(0, o, 24 * b + h)));
    }
  }
  const HeatmapGrid zero = Heatmap(EmptyTensor(AttributionKind::kShap, FrLayout(), 1),
                                   HeatmapAggregation::kSingleInstance);
  for (const auto& b : zero.blocks) EXPECT_TRUE(b.cells.isZero(0.0));
}

TEST(HeatmapTest, CalendarColumnIsSkippedAndErrors) {
  const auto de = FeatureLayout(DefaultMarketConfig(MarketId::kDE));
  EXPECT_EQ(Heatmap(RandomTensor(de, 2, 3), HeatmapAggregation::kMean).blocks.size(), 9u);
  EXPECT_EQ(CodeOf([&] { Heatmap(EmptyTensor(AttributionKind::kShap, de, 0), HeatmapAggregation::kMean); }),
            ErrorCode::kEmptyTensor);
  EXPECT_EQ(CodeOf([&] { Heatmap(RandomTensor(de, 2, 3), HeatmapAggregation::kSingleInstance, 5); }),
            ErrorCode::kInvalidArgument);
}

TEST(HourlyImportanceTest, MeanAbsAndSignFlipInvariant) {
  const auto layout = FrLayout();
  AttributionTensor t = RandomTensor(layout, 4, 4);
  const Partition p = SuperVariablePartition(layout);
  const Eigen::MatrixXd a = HourlyImportance(Aggregate(t, p));
  for (double& v : t.values) v = -v;
  const Eigen::MatrixXd b = HourlyImportance(Aggregate(t, p));
  EXPECT_TRUE(a == b);
  ASSERT_EQ(a.rows(), 24);
  ASSERT_EQ(a.cols(), 5);

  AttributionTensor single = EmptyTensor(AttributionKind::kShap, layout, 1);
  single.MutableInstance(0)(0, 30) = 3.0;
  EXPECT_EQ(HourlyImportance(Aggregate(single, p))(0, 1), 3.0);
}

TEST(BeeswarmTest, RanksByPooledMeanAbs) {
  const auto layout = FrLayout();
  AttributionTensor t = EmptyTensor(AttributionKind::kShap, layout, 2);
  t.instance_ids = {"a", "b"};
  for (int o = 0; o < 24; ++o) {
    t.MutableInstance(0)(o, 10) = 2.0;
    t.MutableInstance(1)(o, 10) = -2.0;
    t.MutableInstance(0)(o, 50) = 1.0;
  }
  Eigen::MatrixXd raw = Eigen::MatrixXd::Random(2, 120);
  const auto rows = BeeswarmTable(t, raw, 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].feature_index, 10);
  EXPECT_DOUBLE_EQ(rows[0].mean_abs_shap, 2.0);
  EXPECT_EQ(rows[1].feature_index, 50);
  EXPECT_DOUBLE_EQ(rows[1].mean_abs_shap, 0.5);
  ASSERT_EQ(rows[0].points.size(), 2u);
  EXPECT_EQ(rows[0].points[1].instance_id, "b");
  EXPECT_EQ(rows[0].points[1].feature_value, raw(1, 10));
  EXPECT_DOUBLE_EQ(rows[0].points[1].shap_value, -2.0);
}

TEST(BeeswarmTest, ClampsAndKeepsLayoutOrderOnTies) {
  const auto layout = FrLayout();
  const AttributionTensor zero = EmptyTensor(AttributionKind::kShap, layout, 1);
  const auto rows = BeeswarmTable(zero, Eigen::MatrixXd::Zero(1, 120), 500);
  ASSERT_EQ(rows.size(), 120u);
  for (int f = 0; f < 120; ++f) EXPECT_EQ(rows[f].feature_index, f);
  EXPECT_EQ(CodeOf([&] { BeeswarmTable(zero, Eigen::MatrixXd::Zero(1, 120), 0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { BeeswarmTable(zero, Eigen::MatrixXd::Zero(2, 120), 3); }), ErrorCode::kDimensionMismatch);
}

TEST(MetricsTest, HandComputedExample) {
  Eigen::MatrixXd p(1, 2), a(1, 2), naive(1, 2);
  p << 1, 3;
  a << 2, 2;
  naive << 4, 4;
  const PerformanceReport r = PerformanceMetrics(p, a, naive);
  EXPECT_DOUBLE_EQ(r.mae, 1.0);
  EXPECT_DOUBLE_EQ(r.rmse, 1.0);
  EXPECT_NEAR(r.smape, 8.0 / 15.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.rmae, 0.5);
}

TEST(MetricsTest, PerfectAndNaiveSelfScore) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(5, 24);
  const Eigen::MatrixXd naive = a.array() + 1.0;
  const PerformanceReport perfect = PerformanceMetrics(a, a, naive);
  EXPECT_EQ(perfect.mae, 0.0);
  EXPECT_EQ(perfect.rmse, 0.0);
  EXPECT_EQ(perfect.smape, 0.0);
  EXPECT_EQ(PerformanceMetrics(naive, a, naive).rmae, 1.0);
}

TEST(MetricsTest, TranslationLeavesAbsoluteErrorsUnchanged) {
  const Eigen::MatrixXd p = Eigen::MatrixXd::Random(4, 24), a = Eigen::MatrixXd::Random(4, 24);
  const Eigen::MatrixXd naive = a.array() + 2.0;
  const PerformanceReport r0 = PerformanceMetrics(p, a, naive);
  const PerformanceReport r1 =
      PerformanceMetrics(p.array() + 100.0, a.array() + 100.0, naive.array() + 100.0);
  EXPECT_NEAR(r0.mae, r1.mae, 1e-12);
  EXPECT_NEAR(r0.rmse, r1.rmse, 1e-12);
  EXPECT_NEAR(r0.rmae, r1.rmae, 1e-12);
}

TEST(MetricsTest, Errors) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Ones(2, 24);
  EXPECT_EQ(CodeOf([&] { PerformanceMetrics(a, a.topRows(1), a); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(CodeOf([&] { PerformanceMetrics(a, a, a); }), ErrorCode::kZeroNaiveError);
}

HourlySeries SeriesFromDays(const std::vector<std::vector<double>>& days) {
  HourlySeries s;
  const Date first = Date(std::chrono::year{2015} / 3 / 1);
  for (size_t d = 0; d < days.size(); ++d) {
    for (int h = 0; h < 24; ++h) {
      s.timestamps.push_back(Timestamp(first + std::chrono::days(d)) + std::chrono::hours(h));
      s.price.push_back(days[d][h]);
      s.exog1.push_back(0.0);
      s.exog2.push_back(0.0);
    }
  }
  return s;
}

TEST(NaiveForecastTest, ConstantAndAlternatingLevels) {
  const NaiveForecast flat = NaiveForecastFor(SeriesFromDays(std::vector(4, std::vector(24, 30.0))));
  EXPECT_EQ(flat.dates.size(), 3u);
  EXPECT_EQ((flat.predicted - flat.actual).cwiseAbs().maxCoeff(), 0.0);

  std::vector<std::vector<double>> days;
  for (int d = 0; d < 6; ++d) days.push_back(std::vector(24, d % 2 ? 55.0 : 20.0));
  const NaiveForecast alt = NaiveForecastFor(SeriesFromDays(days));
  EXPECT_DOUBLE_EQ((alt.predicted - alt.actual).cwiseAbs().mean(), 35.0);
}

TEST(NaiveForecastTest, ShiftedCopyCellByCell) {
  std::vector<std::vector<double>> days(3, std::vector<double>(24));
  Rng rng(5);
  for (auto& d : days) {
    for (double& v : d) v = rng.Uniform() * 100;
  }
  const NaiveForecast n = NaiveForecastFor(SeriesFromDays(days));
  ASSERT_EQ(n.dates.size(), 2u);
  EXPECT_EQ(FormatDate(n.dates[0]), "2015-03-02");
  for (int d = 0; d < 2; ++d) {
    for (int h = 0; h < 24; ++h) {
      EXPECT_EQ(n.predicted(d, h), days[d][h]);
      EXPECT_EQ(n.actual(d, h), days[d + 1][h]);
    }
  }
  EXPECT_EQ(CodeOf([&] { NaiveForecastFor(SeriesFromDays({days[0]})); }), ErrorCode::kInsufficientHistory);
}

TEST(ComplexityTest, ConstantJacobianHasZeroNonLinearity) {
  AttributionTensor g = RandomTensor(FrLayout(), 1, 6, AttributionKind::kGradient);
  AttributionTensor dup = EmptyTensor(AttributionKind::kGradient, g.features, 5);
  for (int i = 0; i < 5; ++i) dup.MutableInstance(i) = g.Instance(0);
  EXPECT_EQ(NonLinearity(dup), 0.0);
  EXPECT_GT(NonLinearity(RandomTensor(FrLayout(), 5, 7, AttributionKind::kGradient)), 0.0);
  EXPECT_EQ(CodeOf([&] { NonLinearity(g); }), ErrorCode::kTooFewInstances);
}

TEST(ComplexityTest, NonLinearityIsMeanPopulationStd) {
  AttributionTensor g = EmptyTensor(AttributionKind::kGradient, FrLayout(), 2, 24);
  g.MutableInstance(0)(0, 0) = 1.0;
  g.MutableInstance(1)(0, 0) = 3.0;
  EXPECT_DOUBLE_EQ(NonLinearity(g), 1.0 / (24.0 * 120.0));
}

TEST(ComplexityTest, HeatmapMeasures) {
  EXPECT_EQ(NonHomogeneity(ConstantGrid(5, 2.0)), 0.0);
  HeatmapGrid g = ConstantGrid(1, 0.0);
  g.blocks[0].cells(0, 0) = 1.0;
  EXPECT_DOUBLE_EQ(NonHomogeneity(g), 2.0 / (2 * 24 * 23));
  EXPECT_EQ(ImportantVariablesPerHour(ConstantGrid(5, 0.6)), 120.0);
  EXPECT_EQ(ImportantVariablesPerHour(ConstantGrid(5, 0.5)), 0.0);
  EXPECT_EQ(CodeOf([] { NonHomogeneity(HeatmapGrid{}); }), ErrorCode::kEmptyTensor);
}

TEST(ComplexityTest, ImportantVariablesNonIncreasingInThreshold) {
  const HeatmapGrid g = Heatmap(RandomTensor(FrLayout(), 4, 8), HeatmapAggregation::kMeanAbs);
  double previous = ImportantVariablesPerHour(g, 0.0);
  for (double th = 0.05; th < 3.0; th += 0.05) {
    const double now = ImportantVariablesPerHour(g, th);
    EXPECT_LE(now, previous);
    previous = now;
  }
}

TEST(RenderTest, HeatmapCellsMatchCsv) {
  const HeatmapGrid g = Heatmap(RandomTensor(FrLayout(), 3, 9), HeatmapAggregation::kMean);
  const Figure a = RenderHeatmap(g, "t", "EUR/MWh");
  EXPECT_EQ(a.svg, RenderHeatmap(g, "t", "EUR/MWh").svg);
  EXPECT_EQ(a.csv, RenderHeatmap(g, "t", "EUR/MWh").csv);
  const auto values = Attributes(a.svg, "data-value");
  EXPECT_EQ(values.size(), 2880u);
  EXPECT_EQ(values, CsvColumn(a.csv, 3));
  EXPECT_EQ(std::stod(values[24 * 24 + 25]), std::stod(FigureNumber(g.blocks[1].cells(1, 1))));
}

TEST(RenderTest, FigureNumberRoundTripsToTenDigits) {
  EXPECT_EQ(FigureNumber(0.0), "0");
  EXPECT_EQ(FigureNumber(1.0 / 3.0), "0.3333333333");
  EXPECT_EQ(FigureNumber(-2.5), "-2.5");
}

TEST(RenderTest, InstanceStackSumsToForecastMinusBaseline) {
  const auto layout = FrLayout();
  const AttributionTensor t = RandomTensor(layout, 2, 10);
  const SshapTensor s = Aggregate(t, SuperVariablePartition(layout));
  const Figure f = RenderInstanceStack(s, 1, "t", "EUR/MWh");
  const auto values = Attributes(f.svg, "data-value");
  ASSERT_EQ(values.size(), 24u * 5 + 24);
  for (int o = 0; o < 24; ++o) {
    double sum = 0.0;
    for (int g = 0; g < 5; ++g) sum += std::stod(values[o * 6 + g]);
    const double dot = std::stod(values[o * 6 + 5]);
    EXPECT_NEAR(sum, dot, 1e-8 * std::max(1.0, std::abs(dot)));
    EXPECT_NEAR(dot, s.prediction(1, o) - s.baseline(1, o), 1e-8 * std::max(1.0, std::abs(dot)));
  }
  EXPECT_EQ(CsvColumn(f.csv, 2).size(), 120u);
}

TEST(RenderTest, LinesAndImportanceCsvMatchSvg) {
  const SshapLine a = SmoothLine("A", {{10, 20, 30}, {1, 2, 3}}, EvenGrid(10, 30, 5), 5);
  const SshapLine b = SmoothLine("B", {{10}, {4}}, EvenGrid(10, 30, 5), 5);
  const Figure lines = RenderLines({a, b}, "t", "EUR/MWh");
  const auto lists = Attributes(lines.svg, "data-values");
  ASSERT_EQ(lists.size(), 2u);
  const auto csv = CsvColumn(lines.csv, 2);
  std::string first;
  for (int i = 0; i < 5; ++i) first += (i ? " " : "") + csv[i];
  EXPECT_EQ(lists[0], first);

  Eigen::MatrixXd imp = Eigen::MatrixXd::Random(24, 3).cwiseAbs();
  const Figure f = RenderHourlyImportance(imp, {"x", "y", "z"}, "t", "EUR/MWh");
  EXPECT_EQ(CsvColumn(f.csv, 2).size(), 72u);
  EXPECT_EQ(Attributes(f.svg, "data-values").size(), 3u);
}

TEST(RenderTest, BeeswarmPointsCarryValues) {
  const auto layout = FrLayout();
  const auto rows = BeeswarmTable(RandomTensor(layout, 3, 11), Eigen::MatrixXd::Random(3, 120), 4);
  const Figure f = RenderBeeswarm(rows, "t", "EUR/MWh");
  EXPECT_EQ(Attributes(f.svg, "data-value"), CsvColumn(f.csv, 5));
}

}  // namespace
}  // namespace epfx
