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

#ifndef EPFX_SHAPLEY_H_
#define EPFX_SHAPLEY_H_

#include <cstdint>

#include <Eigen/Dense>

#include "epfx/mlp.h"

namespace epfx {

// A vector-valued model evaluated on batches of raw feature vectors.
class BatchFunction {
 public:
  virtual ~BatchFunction() = default;
  virtual int num_inputs() const = 0;
  virtual int num_outputs() const = 0;
  // `inputs` is num_inputs x batch; returns num_outputs x batch.
  virtual Eigen::MatrixXd Evaluate(const Eigen::MatrixXd& inputs) const = 0;
};

// Denormalised price forecasts of a trained network.
class ModelPriceFunction : public BatchFunction {
 public:
  explicit ModelPriceFunction(const TrainedModel& model) : model_(model) {}
  int num_inputs() const override { return model_.num_inputs(); }
  int num_outputs() const override { return model_.num_outputs(); }
  Eigen::MatrixXd Evaluate(const Eigen::MatrixXd& inputs) const override {
    return PredictPricesColumns(model_, inputs);
  }

 private:
  const TrainedModel& model_;
};

// Affine map outputs = coefficients * x + intercept.
class LinearFunction : public BatchFunction {
 public:
  LinearFunction(Eigen::MatrixXd coefficients, Eigen::VectorXd intercept)
      : coefficients_(std::move(coefficients)), intercept_(std::move(intercept)) {}
  int num_inputs() const override { return static_cast<int>(coefficients_.cols()); }
  int num_outputs() const override { return static_cast<int>(coefficients_.rows()); }
  Eigen::MatrixXd Evaluate(const Eigen::MatrixXd& inputs) const override {
    Eigen::MatrixXd out = coefficients_ * inputs;
    out.colwise() += intercept_;
    return out;
  }
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }

 private:
  Eigen::MatrixXd coefficients_;
  Eigen::VectorXd intercept_;
};

// Reference rows (raw feature vectors) that absent features are drawn from.
struct BackgroundSet {
  Eigen::MatrixXd rows;  // size x features

  int size() const { return static_cast<int>(rows.rows()); }
};

// `size` rows drawn uniformly without replacement (all rows when size >= the
// row count), kept in their original order.
BackgroundSet SampleBackground(const Eigen::MatrixXd& rows, int size, uint64_t seed);

struct ShapOptions {
  int n_pairs = 64;
  // Also walk each sampled permutation in reverse with the same background row.
  bool antithetic = true;
  uint64_t seed = 0;
};

struct ShapEstimate {
  Eigen::MatrixXd values;          // outputs x features
  Eigen::VectorXd baseline;        // mean model output over the drawn background rows
  Eigen::VectorXd prediction;      // m(x)
  Eigen::MatrixXd standard_error;  // of `values`; +inf with fewer than 2 samples
};

// Permutation sampling: each sample draws a permutation and a background row
// z, then switches the features of z to those of x in permutation order. A
// feature's contribution is the change in output when it is switched.
// Contributions of one walk telescope to m(x) - m(z), so
// values.rowwise().sum() == prediction - baseline for any sample count.
ShapEstimate ShapMonteCarlo(const BatchFunction& model, const Eigen::VectorXd& x,
                            const BackgroundSet& background, const ShapOptions& options);

inline constexpr int kMaxExactFeatures = 12;

// Exact Shapley values for v(S) = mean over background rows z of
// m(x_S, z_rest), by enumerating every coalition. baseline = v(empty).
ShapEstimate ShapExact(const BatchFunction& model, const Eigen::VectorXd& x,
                       const BackgroundSet& background);

}  // namespace epfx

#endif  // EPFX_SHAPLEY_H_
