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

#include "epfx/mlp.h"

#include <cmath>
#include <string>

#include "epfx/error.h"
#include "epfx/random.h"

namespace epfx {
namespace {

void ApplyActivation(Activation activation, Eigen::MatrixXd& values) {
  if (activation == Activation::kIdentity) return;
  values = values.unaryExpr([activation](double z) { return Activate(activation, z); });
}

ScalerParams IdentityScaler(ScalerKind kind, int size) {
  ScalerParams params;
  params.kind = kind;
  params.location = Eigen::VectorXd::Zero(size);
  params.scale = Eigen::VectorXd::Ones(size);
  return params;
}

void CheckFinite(const Eigen::MatrixXd& values) {
  if (!values.allFinite()) throw Error(ErrorCode::kNonFiniteInput, "non-finite model input");
}

}  // namespace

std::string_view ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kSoftplus: return "softplus";
    case Activation::kSelu: return "selu";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

Activation ParseActivation(std::string_view name) {
  if (name == "softplus") return Activation::kSoftplus;
  if (name == "selu") return Activation::kSelu;
  if (name == "identity") return Activation::kIdentity;
  throw Error(ErrorCode::kConfigError, "unknown activation '" + std::string(name) + "'");
}

std::string_view InitializerName(Initializer init) {
  switch (init) {
    case Initializer::kGlorotUniform: return "glorot_uniform";
    case Initializer::kHeNormal: return "he_normal";
    case Initializer::kLecunUniform: return "lecun_uniform";
    case Initializer::kLecunNormal: return "lecun_normal";
  }
  return "?";
}

Initializer ParseInitializer(std::string_view name) {
  if (name == "glorot_uniform") return Initializer::kGlorotUniform;
  if (name == "he_normal") return Initializer::kHeNormal;
  if (name == "lecun_uniform") return Initializer::kLecunUniform;
  if (name == "lecun_normal") return Initializer::kLecunNormal;
  throw Error(ErrorCode::kConfigError, "unknown initializer '" + std::string(name) + "'");
}

double Activate(Activation activation, double z) {
  switch (activation) {
    case Activation::kSoftplus:
      return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    case Activation::kSelu:
      return z > 0.0 ? kSeluLambda * z : kSeluLambda * kSeluAlpha * std::expm1(z);
    case Activation::kIdentity:
      return z;
  }
  return z;
}

double ActivateDerivative(Activation activation, double z) {
  switch (activation) {
    case Activation::kSoftplus:
      return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    case Activation::kSelu:
      return z > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(z);
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

void ModelSpec::Validate() const {
  if (layer_sizes.size() < 2) {
    throw Error(ErrorCode::kInvalidSpec, "a model needs at least input and output sizes");
  }
  for (int size : layer_sizes) {
    if (size < 1) throw Error(ErrorCode::kInvalidSpec, "layer sizes must be >= 1");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error(ErrorCode::kInvalidSpec, "dropout rate must be in [0, 1)");
  }
  if (!(l1_factor >= 0.0)) throw Error(ErrorCode::kInvalidSpec, "l1 factor must be >= 0");
}

ModelSpec BenchmarkSpec(MarketId market) {
  ModelSpec spec;
  const int outputs = 24;
  switch (market) {
    case MarketId::kDE:
      spec.layer_sizes = {217, 329, 379, outputs};
      spec.dropout_rate = 0.455;
      spec.init = Initializer::kGlorotUniform;
      spec.input_scaler = ScalerKind::kStd;
      spec.output_scaler = ScalerKind::kMedian;
      break;
    case MarketId::kFR:
      spec.layer_sizes = {120, 233, 206, outputs};
      spec.dropout_rate = 0.193;
      spec.init = Initializer::kGlorotUniform;
      spec.input_scaler = ScalerKind::kArcsinh;
      spec.output_scaler = ScalerKind::kStd;
      break;
    case MarketId::kBE:
      spec.layer_sizes = {121, 205, 308, outputs};
      spec.dropout_rate = 0.253;
      spec.init = Initializer::kHeNormal;
      spec.input_scaler = ScalerKind::kArcsinh;
      spec.output_scaler = ScalerKind::kArcsinh;
      break;
    case MarketId::kNP:
      spec.layer_sizes = {144, 274, 308, outputs};
      spec.dropout_rate = 0.154;
      spec.init = Initializer::kLecunUniform;
      spec.input_scaler = ScalerKind::kMedian;
      spec.output_scaler = ScalerKind::kStd;
      break;
    case MarketId::kPJM:
      spec.layer_sizes = {120, 299, 376, outputs};
      spec.activation = Activation::kSelu;
      spec.dropout_rate = 0.0079;
      spec.l1_factor = 0.000306;
      spec.init = Initializer::kLecunUniform;
      spec.input_scaler = ScalerKind::kArcsinh;
      spec.output_scaler = ScalerKind::kArcsinh;
      break;
  }
  return spec;
}

int64_t TrainedModel::ParameterCount() const {
  int64_t count = 0;
  for (const auto& layer : layers) count += layer.weights.size() + layer.bias.size();
  return count;
}

TrainedModel InitModel(const ModelSpec& spec) {
  spec.Validate();
  TrainedModel model;
  model.spec = spec;
  Rng rng(spec.seed);
  for (size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
    const int fan_in = spec.layer_sizes[l];
    const int fan_out = spec.layer_sizes[l + 1];
    Layer layer;
    layer.weights.resize(fan_out, fan_in);
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    // Row-major draw order so the stream does not depend on storage order.
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        double w = 0.0;
        switch (spec.init) {
          case Initializer::kGlorotUniform: {
            const double bound = std::sqrt(6.0 / (fan_in + fan_out));
            w = rng.Uniform(-bound, bound);
            break;
          }
          case Initializer::kHeNormal:
            w = rng.Normal() * std::sqrt(2.0 / fan_in);
            break;
          case Initializer::kLecunUniform: {
            const double bound = std::sqrt(3.0 / fan_in);
            w = rng.Uniform(-bound, bound);
            break;
          }
          case Initializer::kLecunNormal:
            w = rng.Normal() * std::sqrt(1.0 / fan_in);
            break;
        }
        layer.weights(r, c) = w;
      }
    }
    model.layers.push_back(std::move(layer));
  }
  model.input_scaler = IdentityScaler(spec.input_scaler, spec.num_inputs());
  model.output_scaler = IdentityScaler(spec.output_scaler, spec.num_outputs());
  return model;
}

ForwardTrace ForwardWithTrace(const TrainedModel& model, const Eigen::MatrixXd& x_norm) {
  ForwardTrace trace;
  const Eigen::MatrixXd* input = &x_norm;
  for (size_t l = 0; l < model.layers.size(); ++l) {
    const Layer& layer = model.layers[l];
    Eigen::MatrixXd z = layer.weights * *input;
    z.colwise() += layer.bias;
    trace.pre.push_back(z);
    if (l + 1 < model.layers.size()) ApplyActivation(model.spec.activation, z);
    trace.post.push_back(std::move(z));
    input = &trace.post.back();
  }
  return trace;
}

Eigen::MatrixXd ForwardBatch(const TrainedModel& model, const Eigen::MatrixXd& x_norm) {
  if (x_norm.rows() != model.num_inputs()) {
    throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(model.num_inputs()) +
                                                   " inputs, got " + std::to_string(x_norm.rows()));
  }
  CheckFinite(x_norm);
  Eigen::MatrixXd activations = x_norm;
  for (size_t l = 0; l < model.layers.size(); ++l) {
    const Layer& layer = model.layers[l];
    Eigen::MatrixXd z = layer.weights * activations;
    z.colwise() += layer.bias;
    if (l + 1 < model.layers.size()) ApplyActivation(model.spec.activation, z);
    activations = std::move(z);
  }
  return activations;
}

Eigen::VectorXd Forward(const TrainedModel& model, const Eigen::VectorXd& x_norm) {
  return ForwardBatch(model, x_norm);
}

Eigen::MatrixXd PredictPricesColumns(const TrainedModel& model, const Eigen::MatrixXd& raw_columns) {
  CheckFinite(raw_columns);
  Eigen::MatrixXd scaled = raw_columns;
  TransformColumns(model.input_scaler, scaled);
  Eigen::MatrixXd out = ForwardBatch(model, scaled);
  InverseTransformColumns(model.output_scaler, out);
  return out;
}

Eigen::VectorXd PredictPrices(const TrainedModel& model, const Eigen::VectorXd& raw_features) {
  return PredictPricesColumns(model, raw_features);
}

Eigen::MatrixXd PredictPricesRows(const TrainedModel& model, const Eigen::MatrixXd& raw_rows) {
  return PredictPricesColumns(model, raw_rows.transpose()).transpose();
}

}  // namespace epfx
