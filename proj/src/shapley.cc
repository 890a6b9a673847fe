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

#include "epfx/shapley.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "epfx/error.h"
#include "epfx/random.h"

namespace epfx {
namespace {

void CheckInputs(const BatchFunction& model, const Eigen::VectorXd& x,
                 const BackgroundSet& background) {
  if (background.size() == 0) throw Error(ErrorCode::kEmptyBackground, "background set is empty");
  if (x.size() != model.num_inputs() || background.rows.cols() != model.num_inputs()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature count does not match the model");
  }
}

Eigen::MatrixXd EvaluateChecked(const BatchFunction& model, const Eigen::MatrixXd& inputs) {
  Eigen::MatrixXd out = model.Evaluate(inputs);
  if (!out.allFinite()) throw Error(ErrorCode::kNonFiniteModelOutput, "model produced non-finite output");
  return out;
}

// Adds the per-feature contributions of one permutation walk starting at z.
void Walk(const BatchFunction& model, const Eigen::VectorXd& x, const Eigen::VectorXd& z,
          std::span<const int> order, Eigen::MatrixXd& contribution) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd states(n, n + 1);
  states.col(0) = z;
  for (int k = 0; k < n; ++k) {
    states.col(k + 1) = states.col(k);
    states(order[k], k + 1) = x(order[k]);
  }
  const Eigen::MatrixXd out = EvaluateChecked(model, states);
  for (int k = 0; k < n; ++k) contribution.col(order[k]) += out.col(k + 1) - out.col(k);
}

}  // namespace

BackgroundSet SampleBackground(const Eigen::MatrixXd& rows, int size, uint64_t seed) {
  const int available = static_cast<int>(rows.rows());
  if (size < 1 || available == 0) throw Error(ErrorCode::kEmptyBackground, "background set is empty");
  std::vector<int> index(available);
  std::iota(index.begin(), index.end(), 0);
  if (size < available) {
    Rng rng(seed);
    rng.Shuffle(std::span<int>(index));
    index.resize(size);
    std::sort(index.begin(), index.end());
  }
  BackgroundSet background;
  background.rows = rows(index, Eigen::all);
  return background;
}

ShapEstimate ShapMonteCarlo(const BatchFunction& model, const Eigen::VectorXd& x,
                            const BackgroundSet& background, const ShapOptions& options) {
  CheckInputs(model, x, background);
  if (options.n_pairs < 1) throw Error(ErrorCode::kInvalidArgument, "n_pairs must be >= 1");
  const int n = model.num_inputs();
  const int outputs = model.num_outputs();

  Rng rng(options.seed);
  std::vector<int> order(n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(outputs, n);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(outputs, n);
  Eigen::VectorXd baseline_sum = Eigen::VectorXd::Zero(outputs);
  Eigen::MatrixXd sample(outputs, n);

  for (int s = 0; s < options.n_pairs; ++s) {
    const Eigen::VectorXd z = background.rows.row(static_cast<Eigen::Index>(
        rng.Index(static_cast<uint64_t>(background.size())))).transpose();
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(std::span<int>(order));

    sample.setZero();
    Walk(model, x, z, order, sample);
    if (options.antithetic) {
      std::reverse(order.begin(), order.end());
      Walk(model, x, z, order, sample);
      sample *= 0.5;
    }
    sum += sample;
    sum_sq += sample.cwiseProduct(sample);
    baseline_sum += EvaluateChecked(model, z);
  }

  const double count = options.n_pairs;
  ShapEstimate estimate;
  estimate.values = sum / count;
  estimate.baseline = baseline_sum / count;
  estimate.prediction = EvaluateChecked(model, x);
  if (options.n_pairs > 1) {
    const Eigen::MatrixXd variance =
        ((sum_sq - sum.cwiseProduct(sum) / count) / (count - 1.0)).cwiseMax(0.0);
    estimate.standard_error = (variance / count).cwiseSqrt();
  } else {
    estimate.standard_error = Eigen::MatrixXd::Constant(outputs, n, std::numeric_limits<double>::infinity());
  }
  return estimate;
}

ShapEstimate ShapExact(const BatchFunction& model, const Eigen::VectorXd& x,
                       const BackgroundSet& background) {
  CheckInputs(model, x, background);
  const int n = model.num_inputs();
  if (n > kMaxExactFeatures) {
    throw Error(ErrorCode::kTooManyFeatures, std::to_string(n) + " features; exact enumeration supports at most " +
                                                 std::to_string(kMaxExactFeatures));
  }
  const int outputs = model.num_outputs();
  const int rows = background.size();
  const uint32_t coalitions = 1u << n;

  // v(S) for every coalition bitmask S.
  Eigen::MatrixXd value(outputs, coalitions);
  const Eigen::MatrixXd base = background.rows.transpose();
  Eigen::MatrixXd states(n, rows);
  for (uint32_t mask = 0; mask < coalitions; ++mask) {
    states = base;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) states.row(i).setConstant(x(i));
    }
    value.col(mask) = EvaluateChecked(model, states).rowwise().mean();
  }

  // Shapley weight |S|! (n - |S| - 1)! / n!.
  std::vector<double> factorial(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) factorial[k] = factorial[k - 1] * k;
  std::vector<double> weight(n);
  for (int s = 0; s < n; ++s) weight[s] = factorial[s] * factorial[n - s - 1] / factorial[n];

  ShapEstimate estimate;
  estimate.values = Eigen::MatrixXd::Zero(outputs, n);
  for (int i = 0; i < n; ++i) {
    const uint32_t bit = 1u << i;
    for (uint32_t mask = 0; mask < coalitions; ++mask) {
      if (mask & bit) continue;
      const int size = std::popcount(mask);
      estimate.values.col(i) += weight[size] * (value.col(mask | bit) - value.col(mask));
    }
  }
  estimate.baseline = value.col(0);
  estimate.prediction = EvaluateChecked(model, x);
  estimate.standard_error = Eigen::MatrixXd::Zero(outputs, n);
  return estimate;
}

}  // namespace epfx
