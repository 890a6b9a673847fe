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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "epfx/error.h"
#include "epfx/explain.h"
#include "epfx/jacobian.h"
#include "epfx/oracle.h"
#include "epfx/random.h"
#include "epfx/shapley.h"

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

// f(x) = product of the inputs, one output.
class ProductFunction : public BatchFunction {
 public:
  explicit ProductFunction(int n) : n_(n) {}
  int num_inputs() const override { return n_; }
  int num_outputs() const override { return 1; }
  Eigen::MatrixXd Evaluate(const Eigen::MatrixXd& inputs) const override {
    return inputs.colwise().prod();
  }

 private:
  int n_;
};

// Value of a coalition: mean over background rows with the members set to x.
Eigen::VectorXd CoalitionValue(const BatchFunction& f, const Eigen::VectorXd& x,
                               const Eigen::MatrixXd& background, const std::vector<bool>& in) {
  Eigen::MatrixXd states = background.transpose();
  for (int i = 0; i < static_cast<int>(in.size()); ++i) {
    if (in[i]) states.row(i).setConstant(x(i));
  }
  return f.Evaluate(states).rowwise().mean();
}

// Shapley values by averaging marginal contributions over all n! orderings.
Eigen::MatrixXd PermutationShapley(const BatchFunction& f, const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& background) {
  const int n = static_cast<int>(x.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(f.num_outputs(), n);
  int count = 0;
  do {
    std::vector<bool> in(n, false);
    Eigen::VectorXd before = CoalitionValue(f, x, background, in);
    for (int k : order) {
      in[k] = true;
      const Eigen::VectorXd after = CoalitionValue(f, x, background, in);
      phi.col(k) += after - before;
      before = after;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return phi / count;
}

TEST(ShapExactTest, ProductModelByHand) {
  const ProductFunction f(2);
  Eigen::VectorXd x(2);
  x << 2, 3;
  BackgroundSet bg{Eigen::MatrixXd(2, 2)};
  bg.rows << 0, 0, 1, 1;
  const ShapEstimate e = ShapExact(f, x, bg);
  EXPECT_DOUBLE_EQ(e.values(0, 0), 2.5);
  EXPECT_DOUBLE_EQ(e.values(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(e.baseline(0), 0.5);
  EXPECT_DOUBLE_EQ(e.prediction(0), 6.0);
  EXPECT_TRUE(e.values.isApprox(PermutationShapley(f, x, bg.rows)));
}

TEST(ShapExactTest, MatchesPermutationEnumerationOnRandomModels) {
  Rng rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 5;
    const TrainedModel model = RandomModel({n, 6, 5, 3}, trial % 2 ? Activation::kSelu : Activation::kSoftplus,
                                           rng.Next());
    const ModelPriceFunction f(model);
    BackgroundSet bg{Eigen::MatrixXd(5, n)};
    for (Eigen::Index i = 0; i < bg.rows.size(); ++i) bg.rows(i) = rng.Normal();
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = rng.Normal();
    const Eigen::MatrixXd oracle = PermutationShapley(f, x, bg.rows);
    const ShapEstimate e = ShapExact(f, x, bg);
    EXPECT_LE((e.values - oracle).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, oracle.cwiseAbs().maxCoeff()));
    EXPECT_NEAR((e.values.rowwise().sum() - (e.prediction - e.baseline)).cwiseAbs().maxCoeff(), 0.0, 1e-10);
  }
}

TEST(ShapExactTest, LinearClosedForm) {
  Eigen::MatrixXd a(2, 3);
  a << 1, -2, 0.5, 3, 0, -1;
  const LinearFunction f(a, Eigen::Vector2d(4, -4));
  BackgroundSet bg{Eigen::MatrixXd(3, 3)};
  bg.rows << 1, 2, 3, 0, 0, 0, -1, 1, 6;
  const Eigen::Vector3d x(2, 2, 2);
  const Eigen::Vector3d mean(0, 1, 3);
  const ShapEstimate e = ShapExact(f, x, bg);
  for (int o = 0; o < 2; ++o) {
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(e.values(o, i), a(o, i) * (x(i) - mean(i)), 1e-12);
  }
}

TEST(ShapExactTest, TooManyFeatures) {
  const LinearFunction f(Eigen::MatrixXd::Ones(1, kMaxExactFeatures + 1), Eigen::VectorXd::Zero(1));
  BackgroundSet bg{Eigen::MatrixXd::Zero(1, kMaxExactFeatures + 1)};
  EXPECT_EQ(CodeOf([&] { ShapExact(f, Eigen::VectorXd::Ones(kMaxExactFeatures + 1), bg); }),
            ErrorCode::kTooManyFeatures);
}

TEST(ShapMonteCarloTest, EfficiencyHoldsForAnyPairCount) {
  const TrainedModel model = RandomModel({30, 12, 12, 24}, Activation::kSoftplus, 5);
  const ModelPriceFunction f(model);
  Rng rng(6);
  BackgroundSet bg{Eigen::MatrixXd(20, 30)};
  for (Eigen::Index i = 0; i < bg.rows.size(); ++i) bg.rows(i) = rng.Normal();
  Eigen::VectorXd x(30);
  for (int i = 0; i < 30; ++i) x(i) = rng.Normal();
  for (int pairs : {1, 4, 64}) {
    for (bool antithetic : {false, true}) {
      const ShapEstimate e = ShapMonteCarlo(f, x, bg, {pairs, antithetic, 77});
      const Eigen::VectorXd gap = e.values.rowwise().sum() - (e.prediction - e.baseline);
      const double scale = std::max(e.prediction.cwiseAbs().maxCoeff(), e.values.cwiseAbs().rowwise().sum().maxCoeff());
      EXPECT_LE(gap.cwiseAbs().maxCoeff(), 1e-12 * scale);
    }
  }
}

TEST(ShapMonteCarloTest, SingleBackgroundRowOnLinearModelIsExact) {
  Eigen::MatrixXd a(1, 4);
  a << 1, 2, -3, 0.25;
  const LinearFunction f(a, Eigen::VectorXd::Constant(1, 9));
  BackgroundSet bg{Eigen::MatrixXd(1, 4)};
  bg.rows << 1, 1, 1, 1;
  const Eigen::Vector4d x(3, 0, 2, 5);
  const ShapEstimate e = ShapMonteCarlo(f, x, bg, {3, true, 1});
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(e.values(0, i), a(0, i) * (x(i) - 1), 1e-12);
  EXPECT_TRUE((e.standard_error.array() < 1e-12).all());
}

TEST(ShapMonteCarloTest, UnusedFeatureGetsExactlyZero) {
  Eigen::MatrixXd a(2, 3);
  a << 1, 0, 2, -1, 0, 1;
  const LinearFunction f(a, Eigen::VectorXd::Zero(2));
  BackgroundSet bg{Eigen::MatrixXd::Random(6, 3)};
  const ShapEstimate e = ShapMonteCarlo(f, Eigen::Vector3d(1, 7, 2), bg, {16, true, 3});
  EXPECT_EQ(e.values(0, 1), 0.0);
  EXPECT_EQ(e.values(1, 1), 0.0);
}

TEST(ShapMonteCarloTest, SeedDeterminesResultAndSingleSampleHasInfiniteError) {
  const TrainedModel model = RandomModel({5, 4, 4, 2}, Activation::kSelu, 8);
  const ModelPriceFunction f(model);
  BackgroundSet bg{Eigen::MatrixXd::Random(4, 5)};
  const Eigen::VectorXd x = Eigen::VectorXd::Random(5);
  EXPECT_TRUE(ShapMonteCarlo(f, x, bg, {8, true, 1}).values == ShapMonteCarlo(f, x, bg, {8, true, 1}).values);
  EXPECT_TRUE(std::isinf(ShapMonteCarlo(f, x, bg, {1, true, 1}).standard_error(0, 0)));
}

TEST(ShapMonteCarloTest, Errors) {
  const LinearFunction f(Eigen::MatrixXd::Ones(1, 2), Eigen::VectorXd::Zero(1));
  EXPECT_EQ(CodeOf([&] { ShapMonteCarlo(f, Eigen::Vector2d(1, 1), BackgroundSet{Eigen::MatrixXd(0, 2)}, {}); }),
            ErrorCode::kEmptyBackground);
  BackgroundSet bg{Eigen::MatrixXd::Zero(1, 2)};
  EXPECT_EQ(CodeOf([&] { ShapMonteCarlo(f, Eigen::Vector2d(1, 1), bg, {0, true, 0}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { ShapMonteCarlo(f, Eigen::Vector3d(1, 1, 1), bg, {}); }),
            ErrorCode::kDimensionMismatch);
  const LinearFunction bad(Eigen::MatrixXd::Constant(1, 2, INFINITY), Eigen::VectorXd::Zero(1));
  EXPECT_EQ(CodeOf([&] { ShapMonteCarlo(bad, Eigen::Vector2d(1, 1), bg, {}); }),
            ErrorCode::kNonFiniteModelOutput);
}

TEST(SampleBackgroundTest, DistinctSortedAndDeterministic) {
  Eigen::MatrixXd rows(50, 1);
  for (int i = 0; i < 50; ++i) rows(i, 0) = i;
  const BackgroundSet a = SampleBackground(rows, 10, 4);
  ASSERT_EQ(a.size(), 10);
  for (int i = 0; i + 1 < 10; ++i) EXPECT_LT(a.rows(i, 0), a.rows(i + 1, 0));
  EXPECT_TRUE(a.rows == SampleBackground(rows, 10, 4).rows);
  EXPECT_EQ(SampleBackground(rows, 80, 4).size(), 50);
  EXPECT_EQ(CodeOf([&] { SampleBackground(rows, 0, 4); }), ErrorCode::kEmptyBackground);
}

TEST(JacobianTest, LinearNetworkIsScaledWeightProduct) {
  ModelSpec spec;
  spec.layer_sizes = {3, 4, 2};
  spec.activation = Activation::kIdentity;
  TrainedModel m = InitModel(spec);
  m.output_scaler = {ScalerKind::kStd, Eigen::Vector2d(10, 10), Eigen::Vector2d(2.5, 2.5)};
  const Eigen::MatrixXd expected = 2.5 * m.layers[1].weights * m.layers[0].weights;
  const Eigen::MatrixXd j = JacobianAtNormalised(m, Eigen::Vector3d(0.3, -1, 2));
  EXPECT_LE((j - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(JacobianTest, FrenchSizedModelAgreesWithCentralDifferences) {
  const TrainedModel m = RandomModel({120, 233, 206, 24}, Activation::kSoftplus, 31);
  Rng rng(32);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd x(120);
    for (int i = 0; i < 120; ++i) x(i) = rng.Normal();
    const Eigen::MatrixXd analytic = JacobianAtNormalised(m, x);
    ASSERT_EQ(analytic.rows(), 24);
    ASSERT_EQ(analytic.cols(), 120);
    Eigen::MatrixXd fd(24, 120);
    const double h = 1e-4;
    for (int i = 0; i < 120; ++i) {
      Eigen::VectorXd up = x, down = x;
      up(i) += h;
      down(i) -= h;
      Eigen::MatrixXd yu = Forward(m, up), yd = Forward(m, down);
      InverseTransformColumns(m.output_scaler, yu);
      InverseTransformColumns(m.output_scaler, yd);
      fd.col(i) = (yu - yd) / (2 * h);
    }
    EXPECT_LE((fd - analytic).cwiseAbs().maxCoeff() / analytic.cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(JacobianTest, RawEntryPointScalesInputFirst) {
  TrainedModel m = RandomModel({6, 5, 5, 24}, Activation::kSelu, 3);
  m.input_scaler.kind = ScalerKind::kArcsinh;
  m.output_scaler.kind = ScalerKind::kArcsinh;
  const Eigen::VectorXd raw = Eigen::VectorXd::LinSpaced(6, -3, 4);
  Eigen::MatrixXd xn = raw;
  TransformColumns(m.input_scaler, xn);
  EXPECT_TRUE(Jacobian(m, raw) == JacobianAtNormalised(m, xn.col(0)));
}

class ExplainDatasetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    model_ = RandomModel({48, 8, 8, 24}, Activation::kSoftplus, 12);
    Rng rng(13);
    for (int g = 0; g < 2; ++g) {
      for (int h = 0; h < 24; ++h) data_.columns.push_back({g ? "B" : "A", h});
    }
    data_.values.resize(7, 48);
    data_.targets = Eigen::MatrixXd::Zero(7, 24);
    for (Eigen::Index i = 0; i < data_.values.size(); ++i) data_.values(i) = rng.Normal();
    for (int r = 0; r < 7; ++r) data_.dates.push_back(Date(std::chrono::days(16000 + r)));
    background_ = SampleBackground(data_.values, 5, 1);
  }
  TrainedModel model_;
  FeatureMatrix data_;
  BackgroundSet background_;
};

TEST_F(ExplainDatasetTest, ThreadCountDoesNotChangeResults) {
  ExplainOptions options;
  options.n_pairs = 4;
  options.seed = 9;
  const Explanation one = ExplainDataset(model_, data_, background_, options);
  options.threads = 3;
  const Explanation three = ExplainDataset(model_, data_, background_, options);
  EXPECT_EQ(one.shap.values, three.shap.values);
  EXPECT_EQ(one.gradient.values, three.gradient.values);
  EXPECT_TRUE(one.shap.baseline == three.shap.baseline);
}

TEST_F(ExplainDatasetTest, TensorsAreConsistent) {
  ExplainOptions options;
  options.n_pairs = 3;
  const Explanation e = ExplainDataset(model_, data_, background_, options);
  ASSERT_EQ(e.shap.instances(), 7);
  EXPECT_EQ(e.shap.instance_ids[0], FormatDate(data_.dates[0]));
  EXPECT_EQ(e.shap.values.size(), 7u * 24 * 48);
  for (int i = 0; i < 7; ++i) {
    const Eigen::VectorXd x = data_.values.row(i).transpose();
    EXPECT_TRUE(Eigen::MatrixXd(e.gradient.Instance(i)) == Jacobian(model_, x));
    const Eigen::VectorXd gap = Eigen::MatrixXd(e.shap.Instance(i)).rowwise().sum() -
                                (e.shap.prediction.row(i) - e.shap.baseline.row(i)).transpose();
    EXPECT_LE(gap.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(e.shap.prediction.row(i).transpose() == PredictPrices(model_, x));
  }
}

TEST_F(ExplainDatasetTest, CsvHasOneRowPerEntry) {
  data_.columns.back() = {"Day of week", -1};
  ExplainOptions options;
  options.n_pairs = 2;
  const Explanation e = ExplainDataset(model_, data_, background_, options);
  std::ostringstream csv;
  WriteAttributionCsv(csv, e.shap);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "instance_id,output_hour,super_variable,input_hour,value");
  int rows = 0, calendar = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",Day of week,,") != std::string::npos) ++calendar;
  }
  EXPECT_EQ(rows, 7 * 24 * 48);
  EXPECT_EQ(calendar, 7 * 24);
}

TEST(OracleBatteryTest, SmallBatteriesPass) {
  EXPECT_TRUE(EfficiencyBattery(30, 1).passed());
  EXPECT_TRUE(LinearClosedFormBattery(10, 2).passed());
  EXPECT_TRUE(JacobianBattery({10, 8, 8, 24}, Activation::kSelu, 5, 1e-4, 3).passed());
}

}  // namespace
}  // namespace epfx
