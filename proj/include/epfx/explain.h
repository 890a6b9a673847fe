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

#ifndef EPFX_EXPLAIN_H_
#define EPFX_EXPLAIN_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "epfx/features.h"
#include "epfx/mlp.h"
#include "epfx/shapley.h"
#include "json.hpp"

namespace epfx {

enum class AttributionKind { kShap, kGradient };

std::string_view AttributionKindName(AttributionKind kind);

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Attribution of every feature on every output hour for a list of instances.
// Shap values are in price units; gradients are price units per normalised
// input unit.
struct AttributionTensor {
  AttributionKind kind = AttributionKind::kShap;
  std::vector<std::string> instance_ids;
  std::vector<FeatureId> features;
  int outputs = kHoursPerDay;
  std::vector<double> values;  // [instance][output][feature]
  // instances x outputs. For kShap, the per-instance E(m(X)) estimate so that
  // each row of an instance block sums to prediction - baseline.
  Eigen::MatrixXd baseline;
  Eigen::MatrixXd prediction;

  int instances() const { return static_cast<int>(instance_ids.size()); }
  int num_features() const { return static_cast<int>(features.size()); }
  size_t Offset(int instance, int output, int feature) const {
    return (static_cast<size_t>(instance) * outputs + output) * features.size() + feature;
  }
  double at(int instance, int output, int feature) const {
    return values[Offset(instance, output, feature)];
  }
  // outputs x features view of one instance.
  Eigen::Map<const RowMajorMatrix> Instance(int instance) const {
    return {values.data() + Offset(instance, 0, 0), outputs, num_features()};
  }
  Eigen::Map<RowMajorMatrix> MutableInstance(int instance) {
    return {values.data() + Offset(instance, 0, 0), outputs, num_features()};
  }
  // Average baseline over instances, per output hour.
  Eigen::VectorXd MeanBaseline() const;
};

AttributionTensor EmptyTensor(AttributionKind kind, std::vector<FeatureId> features, int instances,
                              int outputs = kHoursPerDay);

struct ExplainOptions {
  int n_pairs = 64;
  bool antithetic = true;
  uint64_t seed = 0;
  int threads = 1;
  bool shap = true;
  bool gradient = true;
};

struct Explanation {
  AttributionTensor shap;
  AttributionTensor gradient;
};

// Monte-Carlo SHAP and Jacobians for every row of `features`. Row r uses the
// seed stream DeriveSeed(options.seed, r), so results do not depend on the
// number of worker threads.
Explanation ExplainDataset(const TrainedModel& model, const FeatureMatrix& features,
                           const BackgroundSet& background, const ExplainOptions& options);

// Columns: instance_id,output_hour,super_variable,input_hour,value. The input
// hour is empty for the calendar column.
void WriteAttributionCsv(std::ostream& out, const AttributionTensor& tensor);
// {kind, mean_baseline[24], instances:{id: {baseline[24], prediction[24]}}}.
nlohmann::json BaselineJson(const AttributionTensor& tensor);

}  // namespace epfx

#endif  // EPFX_EXPLAIN_H_
