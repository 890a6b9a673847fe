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

#ifndef EPFX_MLP_H_
#define EPFX_MLP_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "epfx/market_config.h"
#include "epfx/scaler.h"

namespace epfx {

// kIdentity is not one of the benchmark activations; it gives exactly linear
// networks for tests and surrogate models.
enum class Activation { kSoftplus, kSelu, kIdentity };
enum class Initializer { kGlorotUniform, kHeNormal, kLecunUniform, kLecunNormal };

std::string_view ActivationName(Activation activation);
Activation ParseActivation(std::string_view name);
std::string_view InitializerName(Initializer init);
Initializer ParseInitializer(std::string_view name);

inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

double Activate(Activation activation, double z);
double ActivateDerivative(Activation activation, double z);

struct ModelSpec {
  // {inputs, hidden..., outputs}; the benchmark models use two hidden layers
  // and 24 outputs.
  std::vector<int> layer_sizes;
  Activation activation = Activation::kSoftplus;
  double dropout_rate = 0.0;
  double l1_factor = 0.0;
  Initializer init = Initializer::kGlorotUniform;
  ScalerKind input_scaler = ScalerKind::kStd;
  ScalerKind output_scaler = ScalerKind::kStd;
  uint64_t seed = 0;

  int num_inputs() const { return layer_sizes.front(); }
  int num_outputs() const { return layer_sizes.back(); }
  // Throws kInvalidSpec.
  void Validate() const;
};

// Hyperparameters of the five benchmark networks.
ModelSpec BenchmarkSpec(MarketId market);

struct Layer {
  Eigen::MatrixXd weights;  // outputs x inputs
  Eigen::VectorXd bias;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double validation_mae = 0.0;
};

struct TrainedModel {
  ModelSpec spec;
  std::vector<Layer> layers;
  ScalerParams input_scaler;
  ScalerParams output_scaler;
  std::vector<EpochRecord> history;
  int best_epoch = -1;

  int num_inputs() const { return spec.num_inputs(); }
  int num_outputs() const { return spec.num_outputs(); }
  int64_t ParameterCount() const;
};

// Weights drawn from spec.init with spec.seed; biases zero;
// identity scalers.
TrainedModel InitModel(const ModelSpec& spec);

// Pre-activations and activations of every layer for one batch.
struct ForwardTrace {
  std::vector<Eigen::MatrixXd> pre;   // per layer, units x batch
  std::vector<Eigen::MatrixXd> post;  // activations; the last is linear
};

// Inference in normalised space. `x_norm` is inputs x batch.
Eigen::MatrixXd ForwardBatch(const TrainedModel& model, const Eigen::MatrixXd& x_norm);
Eigen::VectorXd Forward(const TrainedModel& model, const Eigen::VectorXd& x_norm);
ForwardTrace ForwardWithTrace(const TrainedModel& model, const Eigen::MatrixXd& x_norm);

// Raw features in, prices out: input scaler, network, inverse output scaler.
Eigen::VectorXd PredictPrices(const TrainedModel& model, const Eigen::VectorXd& raw_features);
// `raw_columns` is inputs x batch; returns outputs x batch.
Eigen::MatrixXd PredictPricesColumns(const TrainedModel& model, const Eigen::MatrixXd& raw_columns);
// `raw_rows` is instances x inputs; returns instances x outputs.
Eigen::MatrixXd PredictPricesRows(const TrainedModel& model, const Eigen::MatrixXd& raw_rows);

}  // namespace epfx

#endif  // EPFX_MLP_H_
