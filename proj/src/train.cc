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

#include "epfx/train.h"

#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "epfx/error.h"
#include "epfx/random.h"

namespace epfx {
namespace {

struct Moments {
  std::vector<Eigen::MatrixXd> w_first, w_second;
  std::vector<Eigen::VectorXd> b_first, b_second;
};

Moments ZeroMoments(const TrainedModel& model) {
  Moments m;
  for (const auto& layer : model.layers) {
    m.w_first.push_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    m.w_second.push_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    m.b_first.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
    m.b_second.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return m;
}

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// One minibatch: forward with dropout, backward, Adam. Returns the summed
// absolute error over the batch.
double TrainBatch(TrainedModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                  Moments& moments, int step, const TrainingHyperparams& hp, Rng& rng) {
  const size_t num_layers = model.layers.size();
  const Activation activation = model.spec.activation;
  const double rate = model.spec.dropout_rate;
  const double keep_scale = 1.0 / (1.0 - rate);

  std::vector<Eigen::MatrixXd> inputs(num_layers);  // input fed to each layer
  std::vector<Eigen::MatrixXd> pre(num_layers);
  std::vector<Eigen::MatrixXd> masks(num_layers);
  inputs[0] = x;
  Eigen::MatrixXd out;
  for (size_t l = 0; l < num_layers; ++l) {
    Eigen::MatrixXd z = model.layers[l].weights * inputs[l];
    z.colwise() += model.layers[l].bias;
    if (l + 1 == num_layers) {
      out = std::move(z);
      break;
    }
    pre[l] = z;
    Eigen::MatrixXd a = z.unaryExpr([activation](double v) { return Activate(activation, v); });
    if (rate > 0.0) {
      masks[l].resize(a.rows(), a.cols());
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
          masks[l](i, j) = rng.Uniform() < rate ? 0.0 : keep_scale;
        }
      }
      a.array() *= masks[l].array();
    }
    inputs[l + 1] = std::move(a);
  }

  const Eigen::MatrixXd residual = out - y;
  const double abs_sum = residual.cwiseAbs().sum();
  if (!std::isfinite(abs_sum)) {
    throw Error(ErrorCode::kDivergedLoss, "non-finite training loss at step " + std::to_string(step));
  }
  const double norm = 1.0 / static_cast<double>(residual.size());
  Eigen::MatrixXd delta = residual.unaryExpr([norm](double r) { return Sign(r) * norm; });

  for (size_t l = num_layers; l-- > 0;) {
    Layer& layer = model.layers[l];
    Eigen::MatrixXd grad_w = delta * inputs[l].transpose();
    Eigen::VectorXd grad_b = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = layer.weights.transpose() * delta;
      if (rate > 0.0) back.array() *= masks[l - 1].array();
      delta = back.cwiseProduct(
          pre[l - 1].unaryExpr([activation](double v) { return ActivateDerivative(activation, v); }));
    }
    if (model.spec.l1_factor > 0.0) {
      grad_w += model.spec.l1_factor * layer.weights.unaryExpr([](double w) { return Sign(w); });
    }
    AdamStep(layer.weights, grad_w, moments.w_first[l], moments.w_second[l], step, hp);
    AdamStep(layer.bias, grad_b, moments.b_first[l], moments.b_second[l], step, hp);
  }
  return abs_sum;
}

}  // namespace

void TrainingHyperparams::Validate() const {
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::kConfigError, "learning_rate must be > 0");
  if (batch_size < 1) throw Error(ErrorCode::kConfigError, "batch_size must be >= 1");
  if (max_epochs < 1) throw Error(ErrorCode::kConfigError, "max_epochs must be >= 1");
  if (early_stop_patience < 1) {
    throw Error(ErrorCode::kConfigError, "early_stop_patience must be >= 1");
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw Error(ErrorCode::kConfigError, "validation_fraction must be in (0, 1)");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw Error(ErrorCode::kConfigError, "adam betas must be in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw Error(ErrorCode::kConfigError, "adam_epsilon must be > 0");
}

double MeanAbsoluteError(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& target) {
  if (predicted.rows() != target.rows() || predicted.cols() != target.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "MAE operands differ in shape");
  }
  if (predicted.size() == 0) return 0.0;
  return (predicted - target).cwiseAbs().sum() / static_cast<double>(predicted.size());
}

double L1Penalty(const TrainedModel& model) {
  if (model.spec.l1_factor == 0.0) return 0.0;
  double total = 0.0;
  for (const auto& layer : model.layers) total += layer.weights.cwiseAbs().sum();
  return model.spec.l1_factor * total;
}

double TrainingObjective(const TrainedModel& model, const Eigen::MatrixXd& x_norm,
                         const Eigen::MatrixXd& y_norm) {
  return MeanAbsoluteError(ForwardBatch(model, x_norm), y_norm) + L1Penalty(model);
}

int ValidationRows(int instances, double validation_fraction) {
  return std::max(1, static_cast<int>(std::lround(validation_fraction * instances)));
}

TrainedModel Train(TrainedModel model, const FeatureMatrix& data, const TrainingHyperparams& hp,
                   const EpochCallback& on_epoch) {
  hp.Validate();
  if (data.cols() != model.num_inputs()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model expects " + std::to_string(model.num_inputs()) + " features, data has " +
                    std::to_string(data.cols()));
  }
  const int n = data.rows();
  const int n_val = ValidationRows(n, hp.validation_fraction);
  const int n_train = n - n_val;
  if (n < 2 * hp.batch_size || n_train < 2) {
    throw Error(ErrorCode::kTooFewInstances,
                std::to_string(n) + " instances; need at least 2 x batch size (" +
                    std::to_string(2 * hp.batch_size) + ")");
  }

  const Eigen::MatrixXd train_x = data.values.topRows(n_train);
  const Eigen::MatrixXd train_y = data.targets.topRows(n_train);
  model.input_scaler = FitScaler(model.spec.input_scaler, train_x);
  model.output_scaler = FitScaler(model.spec.output_scaler, train_y);

  const Eigen::MatrixXd x = Transform(model.input_scaler, train_x).transpose();
  const Eigen::MatrixXd y = Transform(model.output_scaler, train_y).transpose();
  const Eigen::MatrixXd x_val =
      Transform(model.input_scaler, data.values.bottomRows(n_val)).transpose();
  const Eigen::MatrixXd y_val =
      Transform(model.output_scaler, data.targets.bottomRows(n_val)).transpose();
  if (!x.allFinite() || !y.allFinite() || !x_val.allFinite() || !y_val.allFinite()) {
    throw Error(ErrorCode::kNonFiniteInput, "non-finite training data");
  }

  Rng rng(hp.seed);
  Moments moments = ZeroMoments(model);
  std::vector<int> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  model.history.clear();
  double best_mae = std::numeric_limits<double>::infinity();
  std::vector<Layer> best_layers = model.layers;
  int best_epoch = -1;
  int step = 0;
  for (int epoch = 0; epoch < hp.max_epochs; ++epoch) {
    rng.Shuffle(std::span<int>(order));
    double abs_sum = 0.0;
    for (int begin = 0; begin < n_train; begin += hp.batch_size) {
      const int end = std::min(n_train, begin + hp.batch_size);
      const std::vector<int> idx(order.begin() + begin, order.begin() + end);
      const Eigen::MatrixXd bx = x(Eigen::all, idx);
      const Eigen::MatrixXd by = y(Eigen::all, idx);
      abs_sum += TrainBatch(model, bx, by, moments, ++step, hp, rng);
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = abs_sum / static_cast<double>(y.size()) + L1Penalty(model);
    record.validation_mae = MeanAbsoluteError(ForwardBatch(model, x_val), y_val);
    if (!std::isfinite(record.validation_mae) || !std::isfinite(record.train_loss)) {
      throw Error(ErrorCode::kDivergedLoss, "non-finite loss at epoch " + std::to_string(epoch));
    }
    model.history.push_back(record);
    if (on_epoch) on_epoch(record);
    if (record.validation_mae < best_mae) {
      best_mae = record.validation_mae;
      best_layers = model.layers;
      best_epoch = epoch;
    } else if (epoch - best_epoch >= hp.early_stop_patience) {
      break;
    }
  }
  model.layers = std::move(best_layers);
  model.best_epoch = best_epoch;
  return model;
}

}  // namespace epfx
