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

#ifndef EPFX_JACOBIAN_H_
#define EPFX_JACOBIAN_H_

#include <Eigen/Dense>

#include "epfx/mlp.h"

namespace epfx {

// d(denormalised output j) / d(normalised input i), by reverse accumulation
// through the inverse output scaler and the network. Returns outputs x inputs.
Eigen::MatrixXd Jacobian(const TrainedModel& model, const Eigen::VectorXd& raw_features);
Eigen::MatrixXd JacobianAtNormalised(const TrainedModel& model, const Eigen::VectorXd& x_norm);

}  // namespace epfx

#endif  // EPFX_JACOBIAN_H_
