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

#include "epfx/scaler.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "epfx/error.h"

namespace epfx {
namespace {

double Median(std::vector<double> values) {
  const size_t n = values.size();
  const size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

void CheckColumns(const ScalerParams& params, Eigen::Index count) {
  if (count != params.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "scaler has " + std::to_string(params.size()) + " columns, input has " +
                    std::to_string(count));
  }
}

}  // namespace

std::string_view ScalerKindName(ScalerKind kind) {
  switch (kind) {
    case ScalerKind::kStd: return "Std";
    case ScalerKind::kMedian: return "Median";
    case ScalerKind::kArcsinh: return "Arcsinh";
  }
  return "?";
}

ScalerKind ParseScalerKind(std::string_view name) {
  if (name == "Std") return ScalerKind::kStd;
  if (name == "Median") return ScalerKind::kMedian;
  if (name == "Arcsinh") return ScalerKind::kArcsinh;
  throw Error(ErrorCode::kConfigError, "unknown scaler kind '" + std::string(name) + "'");
}

ScalerParams FitScaler(ScalerKind kind, const Eigen::MatrixXd& columns) {
  if (columns.rows() < 2) {
    throw Error(ErrorCode::kTooFewRows, "scaler needs at least 2 rows");
  }
  ScalerParams params;
  params.kind = kind;
  params.location.resize(columns.cols());
  params.scale.resize(columns.cols());
  const double n = static_cast<double>(columns.rows());
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    double location, spread;
    if (kind == ScalerKind::kStd) {
      location = columns.col(c).sum() / n;
      spread = std::sqrt((columns.col(c).array() - location).square().sum() / n);
    } else {
      std::vector<double> col(columns.col(c).data(), columns.col(c).data() + columns.rows());
      location = Median(col);
      for (double& v : col) v = std::abs(v - location);
      spread = Median(std::move(col));
    }
    params.location(c) = location;
    params.scale(c) = spread > 0.0 ? spread : 1.0;
  }
  return params;
}

void TransformColumns(const ScalerParams& params, Eigen::Ref<Eigen::MatrixXd> values) {
  CheckColumns(params, values.rows());
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    values.col(j) = (values.col(j) - params.location).cwiseQuotient(params.scale);
  }
  if (params.kind == ScalerKind::kArcsinh) values = values.array().asinh().matrix();
}

void InverseTransformColumns(const ScalerParams& params, Eigen::Ref<Eigen::MatrixXd> values) {
  CheckColumns(params, values.rows());
  if (params.kind == ScalerKind::kArcsinh) values = values.array().sinh().matrix();
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    values.col(j) = values.col(j).cwiseProduct(params.scale) + params.location;
  }
}

Eigen::MatrixXd Transform(const ScalerParams& params, const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = values.transpose();
  TransformColumns(params, out);
  return out.transpose();
}

Eigen::MatrixXd InverseTransform(const ScalerParams& params, const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = values.transpose();
  InverseTransformColumns(params, out);
  return out.transpose();
}

Eigen::MatrixXd InverseTransformDerivative(const ScalerParams& params,
                                           const Eigen::MatrixXd& scaled_columns) {
  CheckColumns(params, scaled_columns.rows());
  Eigen::MatrixXd out(scaled_columns.rows(), scaled_columns.cols());
  for (Eigen::Index j = 0; j < scaled_columns.cols(); ++j) {
    if (params.kind == ScalerKind::kArcsinh) {
      out.col(j) = params.scale.cwiseProduct(scaled_columns.col(j).array().cosh().matrix());
    } else {
      out.col(j) = params.scale;
    }
  }
  return out;
}

}  // namespace epfx
