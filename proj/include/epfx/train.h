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

#ifndef EPFX_TRAIN_H_
#define EPFX_TRAIN_H_

#include <cmath>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "epfx/features.h"
#include "epfx/mlp.h"

namespace epfx {

struct TrainingHyperparams {
  double learning_rate = 1e-3;
  int batch_size = 64;
  int max_epochs = 300;
  int early_stop_patience = 20;
  // The chronologically last slice is held out for early stopping.
  double validation_fraction = 0.15;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  uint64_t seed = 0;

  void Validate() const;
};

// Bias-corrected Adam update of one parameter block. `step` starts at 1.
template <typename Block>
void AdamStep(Block& param, const Block& grad, Block& first, Block& second, int step,
              const TrainingHyperparams& hp) {
  first = hp.adam_beta1 * first + (1.0 - hp.adam_beta1) * grad;
  second = hp.adam_beta2 * second + (1.0 - hp.adam_beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(hp.adam_beta1, step);
  const double c2 = 1.0 - std::pow(hp.adam_beta2, step);
  param.array() -= hp.learning_rate * (first.array() / c1) /
                   ((second.array() / c2).sqrt() + hp.adam_epsilon);
}

// Mean absolute error over all entries of two equally shaped blocks.
double MeanAbsoluteError(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& target);
// l1_factor * sum |W| over all weight matrices (biases excluded).
double L1Penalty(const TrainedModel& model);
// MAE in normalised output units plus the L1 penalty, without dropout.
// `x_norm` is inputs x batch and `y_norm` outputs x batch.
double TrainingObjective(const TrainedModel& model, const Eigen::MatrixXd& x_norm,
                         const Eigen::MatrixXd& y_norm);

using EpochCallback = std::function<void(const EpochRecord&)>;

// Size of the chronologically last slice held out for early stopping.
int ValidationRows(int instances, double validation_fraction);

// Fits the scalers on the training slice, then minimises MAE + L1 with Adam
// and inverted dropout on the hidden layers. Returns the weights of the epoch
// with the lowest validation MAE. Throws kTooFewInstances or kDivergedLoss.
TrainedModel Train(TrainedModel model, const FeatureMatrix& data, const TrainingHyperparams& hp,
                   const EpochCallback& on_epoch = {});

}  // namespace epfx

#endif  // EPFX_TRAIN_H_
