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

#ifndef EPFX_SCALER_H_
#define EPFX_SCALER_H_

#include <string_view>

#include <Eigen/Dense>

namespace epfx {

enum class ScalerKind { kStd, kMedian, kArcsinh };

std::string_view ScalerKindName(ScalerKind kind);
ScalerKind ParseScalerKind(std::string_view name);

// Per-column normalisation. Std uses mean and population standard deviation;
// Median and Arcsinh use median and median absolute deviation, Arcsinh then
// applies asinh. A zero spread is stored as 1.
struct ScalerParams {
  ScalerKind kind = ScalerKind::kStd;
  Eigen::VectorXd location;
  Eigen::VectorXd scale;

  int size() const { return static_cast<int>(location.size()); }
};

// `columns` is rows x columns; needs at least two rows.
ScalerParams FitScaler(ScalerKind kind, const Eigen::MatrixXd& columns);

// Row-wise transforms of a rows x columns matrix.
Eigen::MatrixXd Transform(const ScalerParams& params, const Eigen::MatrixXd& values);
Eigen::MatrixXd InverseTransform(const ScalerParams& params, const Eigen::MatrixXd& values);

// Column-vector variants; `values` has params.size() rows and one column per
// sample.
void TransformColumns(const ScalerParams& params, Eigen::Ref<Eigen::MatrixXd> values);
void InverseTransformColumns(const ScalerParams& params, Eigen::Ref<Eigen::MatrixXd> values);

// d(inverse_transform)/d(scaled value) for each entry of a column-major block.
Eigen::MatrixXd InverseTransformDerivative(const ScalerParams& params,
                                           const Eigen::MatrixXd& scaled_columns);

}  // namespace epfx

#endif  // EPFX_SCALER_H_
