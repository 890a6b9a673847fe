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

#include "epfx/jacobian.h"

#include "epfx/error.h"

namespace epfx {

Eigen::MatrixXd JacobianAtNormalised(const TrainedModel& model, const Eigen::VectorXd& x_norm) {
  if (x_norm.size() != model.num_inputs()) {
    throw Error(ErrorCode::kDimensionMismatch, "jacobian input has wrong length");
  }
  if (!x_norm.allFinite()) throw Error(ErrorCode::kNonFiniteInput, "non-finite model input");
  const ForwardTrace trace = ForwardWithTrace(model, x_norm);
  const Activation activation = model.spec.activation;

  // Rows are outputs; start from the diagonal of the inverse output scaler.
  const Eigen::VectorXd out_scale =
      InverseTransformDerivative(model.output_scaler, trace.post.back()).col(0);
  Eigen::MatrixXd adjoint = out_scale.asDiagonal() * model.layers.back().weights;
  for (size_t l = model.layers.size() - 1; l-- > 0;) {
    const Eigen::VectorXd slope = trace.pre[l].col(0).unaryExpr(
        [activation](double z) { return ActivateDerivative(activation, z); });
    adjoint = (adjoint * slope.asDiagonal()) * model.layers[l].weights;
  }
  return adjoint;
}

Eigen::MatrixXd Jacobian(const TrainedModel& model, const Eigen::VectorXd& raw_features) {
  if (raw_features.size() != model.num_inputs()) {
    throw Error(ErrorCode::kDimensionMismatch, "jacobian input has wrong length");
  }
  if (!raw_features.allFinite()) throw Error(ErrorCode::kNonFiniteInput, "non-finite model input");
  Eigen::MatrixXd x = raw_features;
  TransformColumns(model.input_scaler, x);
  return JacobianAtNormalised(model, x.col(0));
}

}  // namespace epfx
