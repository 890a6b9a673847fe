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

#include "epfx/explain.h"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "epfx/error.h"
#include "epfx/jacobian.h"
#include "epfx/random.h"
#include "epfx/text.h"

namespace epfx {

std::string_view AttributionKindName(AttributionKind kind) {
  return kind == AttributionKind::kShap ? "shap" : "gradient";
}

Eigen::VectorXd AttributionTensor::MeanBaseline() const {
  if (baseline.rows() == 0) return Eigen::VectorXd::Zero(outputs);
  return baseline.colwise().mean().transpose();
}

AttributionTensor EmptyTensor(AttributionKind kind, std::vector<FeatureId> features, int instances,
                              int outputs) {
  AttributionTensor tensor;
  tensor.kind = kind;
  tensor.features = std::move(features);
  tensor.outputs = outputs;
  tensor.instance_ids.resize(instances);
  tensor.values.assign(static_cast<size_t>(instances) * outputs * tensor.features.size(), 0.0);
  tensor.baseline = Eigen::MatrixXd::Zero(instances, outputs);
  tensor.prediction = Eigen::MatrixXd::Zero(instances, outputs);
  return tensor;
}

Explanation ExplainDataset(const TrainedModel& model, const FeatureMatrix& features,
                           const BackgroundSet& background, const ExplainOptions& options) {
  if (features.cols() != model.num_inputs()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature matrix does not match the model inputs");
  }
  const int n = features.rows();
  const int outputs = model.num_outputs();
  Explanation result;
  result.shap = EmptyTensor(AttributionKind::kShap, features.columns, options.shap ? n : 0, outputs);
  result.gradient =
      EmptyTensor(AttributionKind::kGradient, features.columns, options.gradient ? n : 0, outputs);
  for (int r = 0; r < n; ++r) {
    const std::string id = FormatDate(features.dates[r]);
    if (options.shap) result.shap.instance_ids[r] = id;
    if (options.gradient) result.gradient.instance_ids[r] = id;
  }
  if (n == 0) return result;

  const ModelPriceFunction function(model);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int r = next++; r < n; r = next++) {
      try {
        const Eigen::VectorXd x = features.values.row(r).transpose();
        if (options.shap) {
          ShapOptions shap_options{options.n_pairs, options.antithetic, DeriveSeed(options.seed, r)};
          const ShapEstimate estimate = ShapMonteCarlo(function, x, background, shap_options);
          result.shap.MutableInstance(r) = estimate.values;
          result.shap.baseline.row(r) = estimate.baseline.transpose();
          result.shap.prediction.row(r) = estimate.prediction.transpose();
        }
        if (options.gradient) {
          result.gradient.MutableInstance(r) = Jacobian(model, x);
          result.gradient.prediction.row(r) = PredictPrices(model, x).transpose();
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  const int threads = std::max(1, std::min(options.threads, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

void WriteAttributionCsv(std::ostream& out, const AttributionTensor& tensor) {
  out << "instance_id,output_hour,super_variable,input_hour,value\n";
  std::vector<std::string> groups, hours;
  for (const auto& f : tensor.features) {
    groups.push_back(CsvField(f.group));
    hours.push_back(f.IsHourly() ? std::to_string(f.hour) : "");
  }
  for (int i = 0; i < tensor.instances(); ++i) {
    for (int o = 0; o < tensor.outputs; ++o) {
      for (int f = 0; f < tensor.num_features(); ++f) {
        out << tensor.instance_ids[i] << ',' << o << ',' << groups[f] << ',' << hours[f] << ','
            << FormatNumber(tensor.at(i, o, f)) << '\n';
      }
    }
  }
}

nlohmann::json BaselineJson(const AttributionTensor& tensor) {
  auto to_vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.begin(), v.end()); };
  nlohmann::json instances = nlohmann::json::object();
  for (int i = 0; i < tensor.instances(); ++i) {
    instances[tensor.instance_ids[i]] = {
        {"baseline", to_vec(tensor.baseline.row(i).transpose())},
        {"prediction", to_vec(tensor.prediction.row(i).transpose())}};
  }
  return {{"kind", AttributionKindName(tensor.kind)},
          {"mean_baseline", to_vec(tensor.MeanBaseline())},
          {"instances", instances}};
}

}  // namespace epfx
