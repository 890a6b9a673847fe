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

#include "epfx/oracle.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "epfx/explain.h"
#include "epfx/jacobian.h"
#include "epfx/partition.h"
#include "epfx/random.h"
#include "epfx/shapley.h"
#include "epfx/sshap.h"

namespace epfx {
namespace {

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Eigen::VectorXd RandomVector(Rng& rng, int size, double sd = 1.0) {
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = sd * rng.Normal();
  return v;
}

Eigen::MatrixXd RandomRows(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) m.row(r) = RandomVector(rng, cols).transpose();
  return m;
}

void Record(OracleResult& result, double statistic, bool failed) {
  ++result.checks;
  if (failed) ++result.failures;
  result.worst = std::max(result.worst, statistic);
}

// Hourly layout with `groups` super-variables of 24 hours each.
std::vector<FeatureId> HourlyLayout(int groups) {
  std::vector<FeatureId> layout;
  for (int g = 0; g < groups; ++g) {
    for (int h = 0; h < kHoursPerDay; ++h) layout.push_back({"G" + std::to_string(g), h});
  }
  return layout;
}

}  // namespace

nlohmann::json ToJson(const OracleResult& result) {
  return {{"name", result.name},     {"passed", result.passed()},      {"checks", result.checks},
          {"failures", result.failures}, {"worst", result.worst}, {"tolerance", result.tolerance}};
}

TrainedModel RandomModel(const std::vector<int>& layer_sizes, Activation activation,
                         uint64_t seed) {
  ModelSpec spec;
  spec.layer_sizes = layer_sizes;
  spec.activation = activation;
  spec.init = Initializer::kGlorotUniform;
  spec.seed = DeriveSeed(seed, 0);
  TrainedModel model = InitModel(spec);
  Rng rng(DeriveSeed(seed, 1));
  for (Layer& layer : model.layers) layer.bias = RandomVector(rng, static_cast<int>(layer.bias.size()), 0.1);
  const int n = layer_sizes.front();
  const int k = layer_sizes.back();
  model.input_scaler.kind = ScalerKind::kStd;
  model.input_scaler.location = RandomVector(rng, n);
  model.input_scaler.scale = Eigen::VectorXd::NullaryExpr(n, [&] { return rng.Uniform(0.5, 2.0); });
  model.output_scaler.kind = ScalerKind::kStd;
  model.output_scaler.location = RandomVector(rng, k, 10.0);
  model.output_scaler.scale = Eigen::VectorXd::NullaryExpr(k, [&] { return rng.Uniform(1.0, 10.0); });
  return model;
}

OracleResult EfficiencyBattery(int triples, uint64_t seed) {
  Stopwatch watch;
  OracleResult result{"efficiency", 0, 0, 0.0, 1e-9, 0.0};
  constexpr int kPairs[] = {1, 4, 64};
  Rng rng(seed);
  for (int t = 0; t < triples; ++t) {
    const int groups = 1 + static_cast<int>(rng.Index(2));
    const std::vector<FeatureId> layout = HourlyLayout(groups);
    const int n = static_cast<int>(layout.size());
    const int hidden = 4 + static_cast<int>(rng.Index(8));
    const Activation act = rng.Index(2) ? Activation::kSelu : Activation::kSoftplus;
    const TrainedModel model = RandomModel({n, hidden, hidden, kHoursPerDay}, act, rng.Next());
    const ModelPriceFunction f(model);
    BackgroundSet background{RandomRows(rng, 8, n)};
    const Eigen::VectorXd x = RandomVector(rng, n);
    const ShapOptions options{kPairs[t % 3], rng.Index(2) == 1, rng.Next()};
    const ShapEstimate estimate = ShapMonteCarlo(f, x, background, options);

    AttributionTensor tensor = EmptyTensor(AttributionKind::kShap, layout, 1);
    tensor.MutableInstance(0) = estimate.values;
    tensor.baseline.row(0) = estimate.baseline.transpose();
    tensor.prediction.row(0) = estimate.prediction.transpose();
    const SshapTensor sshap = Aggregate(tensor, SuperVariablePartition(layout));
    const Eigen::MatrixXd grouped = sshap.Instance(0);

    for (int o = 0; o < kHoursPerDay; ++o) {
      const double sum = estimate.values.row(o).sum();
      const double abs_sum = estimate.values.row(o).cwiseAbs().sum();
      const double target = estimate.prediction(o) - estimate.baseline(o);
      const double scale = std::max({std::abs(estimate.prediction(o)), std::abs(estimate.baseline(o)), abs_sum});
      const double e1 = std::abs(sum - target) / scale;
      const double e2 = std::abs(grouped.row(o).sum() - sum) / std::max(abs_sum, 1e-300);
      Record(result, e1, !(e1 <= result.tolerance));
      Record(result, e2, !(e2 <= result.tolerance));
    }
  }
  result.seconds = watch.Seconds();
  return result;
}

OracleResult ShapExactBattery(int models, int n_pairs, uint64_t seed) {
  Stopwatch watch;
  OracleResult result{"shap_mc_vs_exact", 0, 0, 0.0, 3.0, 0.0};
  Rng rng(seed);
  for (int m = 0; m < models; ++m) {
    const int n = 2 + static_cast<int>(rng.Index(9));  // 2..10 features
    const int hidden = 4 + static_cast<int>(rng.Index(9));
    const Activation act = rng.Index(2) ? Activation::kSelu : Activation::kSoftplus;
    const TrainedModel model = RandomModel({n, hidden, hidden, 1}, act, rng.Next());
    const ModelPriceFunction f(model);
    BackgroundSet background{RandomRows(rng, 10, n)};
    const Eigen::VectorXd x = RandomVector(rng, n);
    const ShapEstimate exact = ShapExact(f, x, background);
    const ShapEstimate mc = ShapMonteCarlo(f, x, background, {n_pairs, true, rng.Next()});
    for (Eigen::Index i = 0; i < exact.values.size(); ++i) {
      const double diff = std::abs(mc.values(i) - exact.values(i));
      const double se = mc.standard_error(i);
      const double z = se > 0 ? diff / se : (diff > 1e-6 ? INFINITY : 0.0);
      Record(result, z, diff > std::max(3.0 * se, 1e-6));
    }
  }
  result.seconds = watch.Seconds();
  return result;
}

OracleResult LinearClosedFormBattery(int models, uint64_t seed) {
  Stopwatch watch;
  OracleResult result{"linear_closed_form", 0, 0, 0.0, 1e-9, 0.0};
  Rng rng(seed);
  for (int m = 0; m < models; ++m) {
    const int n = 1 + static_cast<int>(rng.Index(kMaxExactFeatures));
    const int k = 1 + static_cast<int>(rng.Index(4));
    const LinearFunction f(RandomRows(rng, k, n), RandomVector(rng, k));
    BackgroundSet background{RandomRows(rng, 1 + static_cast<int>(rng.Index(20)), n)};
    const Eigen::VectorXd x = RandomVector(rng, n);
    const ShapEstimate exact = ShapExact(f, x, background);
    const Eigen::VectorXd centred = x - background.rows.colwise().mean().transpose();
    for (int o = 0; o < k; ++o) {
      for (int i = 0; i < n; ++i) {
        const double expected = f.coefficients()(o, i) * centred(i);
        const double diff = std::abs(exact.values(o, i) - expected);
        Record(result, diff, !(diff <= result.tolerance));
      }
    }
  }
  result.seconds = watch.Seconds();
  return result;
}

OracleResult JacobianBattery(const std::vector<int>& layer_sizes, Activation activation,
                             int instances, double h, uint64_t seed) {
  Stopwatch watch;
  OracleResult result{"jacobian_vs_finite_difference", 0, 0, 0.0, 1e-5, 0.0};
  const TrainedModel model = RandomModel(layer_sizes, activation, seed);
  Rng rng(DeriveSeed(seed, 7));
  const int n = layer_sizes.front();
  for (int s = 0; s < instances; ++s) {
    const Eigen::VectorXd x_norm = RandomVector(rng, n);
    const Eigen::MatrixXd analytic = JacobianAtNormalised(model, x_norm);
    // Perturbed copies of x in normalised units, two per input.
    Eigen::MatrixXd probes(n, 2 * n);
    for (int i = 0; i < n; ++i) {
      probes.col(2 * i) = x_norm;
      probes.col(2 * i + 1) = x_norm;
      probes(i, 2 * i) += h;
      probes(i, 2 * i + 1) -= h;
    }
    Eigen::MatrixXd prices = ForwardBatch(model, probes);
    InverseTransformColumns(model.output_scaler, prices);
    Eigen::MatrixXd fd(analytic.rows(), n);
    for (int i = 0; i < n; ++i) fd.col(i) = (prices.col(2 * i) - prices.col(2 * i + 1)) / (2.0 * h);
    const double error = (fd - analytic).cwiseAbs().maxCoeff() / analytic.cwiseAbs().maxCoeff();
    Record(result, error, !(error <= result.tolerance));
  }
  result.seconds = watch.Seconds();
  return result;
}

std::vector<OracleResult> RunOracleSuite(uint64_t seed) {
  return {EfficiencyBattery(1000, DeriveSeed(seed, 1)),
          ShapExactBattery(20, 2000, DeriveSeed(seed, 2)),
          LinearClosedFormBattery(50, DeriveSeed(seed, 3)),
          JacobianBattery({120, 233, 206, 24}, Activation::kSoftplus, 100, 1e-4, DeriveSeed(seed, 4))};
}

}  // namespace epfx
