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

#include "epfx/model_io.h"

#include <fstream>
#include <sstream>

#include "epfx/error.h"
#include "json.hpp"

namespace epfx {
namespace {

using nlohmann::json;

json ScalerToJson(const ScalerParams& params) {
  return {{"kind", ScalerKindName(params.kind)},
          {"location", std::vector<double>(params.location.begin(), params.location.end())},
          {"scale", std::vector<double>(params.scale.begin(), params.scale.end())}};
}

Eigen::VectorXd ToVector(const std::vector<double>& values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

ScalerParams ScalerFromJson(const json& j) {
  ScalerParams params;
  params.kind = ParseScalerKind(j.at("kind").get<std::string>());
  params.location = ToVector(j.at("location").get<std::vector<double>>());
  params.scale = ToVector(j.at("scale").get<std::vector<double>>());
  if (params.location.size() != params.scale.size()) {
    throw Error(ErrorCode::kCorruptPayload, "scaler location/scale lengths differ");
  }
  return params;
}

}  // namespace

json ModelSpecToJson(const ModelSpec& spec) {
  return {{"layer_sizes", spec.layer_sizes},
          {"activation", ActivationName(spec.activation)},
          {"dropout_rate", spec.dropout_rate},
          {"l1_factor", spec.l1_factor},
          {"init", InitializerName(spec.init)},
          {"input_scaler", ScalerKindName(spec.input_scaler)},
          {"output_scaler", ScalerKindName(spec.output_scaler)},
          {"seed", spec.seed}};
}

ModelSpec ModelSpecFromJson(const json& j) {
  ModelSpec spec;
  spec.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  spec.activation = ParseActivation(j.at("activation").get<std::string>());
  spec.dropout_rate = j.at("dropout_rate").get<double>();
  spec.l1_factor = j.at("l1_factor").get<double>();
  spec.init = ParseInitializer(j.at("init").get<std::string>());
  spec.input_scaler = ParseScalerKind(j.at("input_scaler").get<std::string>());
  spec.output_scaler = ParseScalerKind(j.at("output_scaler").get<std::string>());
  spec.seed = j.at("seed").get<uint64_t>();
  return spec;
}

namespace {

void CheckShapes(const TrainedModel& model) {
  const auto& sizes = model.spec.layer_sizes;
  if (model.layers.size() + 1 != sizes.size()) {
    throw Error(ErrorCode::kCorruptPayload, "layer count does not match layer_sizes");
  }
  for (size_t l = 0; l < model.layers.size(); ++l) {
    const Layer& layer = model.layers[l];
    if (layer.weights.cols() != sizes[l] || layer.weights.rows() != sizes[l + 1] ||
        layer.bias.size() != sizes[l + 1]) {
      throw Error(ErrorCode::kCorruptPayload, "layer " + std::to_string(l) + " has wrong shape");
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw Error(ErrorCode::kCorruptPayload, "non-finite parameter in layer " + std::to_string(l));
    }
  }
  if (model.input_scaler.size() != sizes.front() || model.output_scaler.size() != sizes.back()) {
    throw Error(ErrorCode::kCorruptPayload, "scaler sizes do not match layer_sizes");
  }
}

}  // namespace

std::string SaveModel(const TrainedModel& model, const std::vector<std::string>& feature_names) {
  json layers = json::array();
  for (const auto& layer : model.layers) {
    std::vector<double> row_major;
    row_major.reserve(static_cast<size_t>(layer.weights.size()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) row_major.push_back(layer.weights(r, c));
    }
    layers.push_back({{"rows", layer.weights.rows()},
                      {"cols", layer.weights.cols()},
                      {"weights_row_major", row_major},
                      {"bias", std::vector<double>(layer.bias.begin(), layer.bias.end())}});
  }
  json history = json::array();
  for (const auto& record : model.history) {
    history.push_back({{"epoch", record.epoch},
                       {"train_loss", record.train_loss},
                       {"validation_mae", record.validation_mae}});
  }
  json doc = {{"schema_version", kModelSchemaVersion},
              {"spec", ModelSpecToJson(model.spec)},
              {"scalers", {{"input", ScalerToJson(model.input_scaler)},
                           {"output", ScalerToJson(model.output_scaler)}}},
              {"layers", layers},
              {"history", history},
              {"best_epoch", model.best_epoch},
              {"features", feature_names}};
  return doc.dump() + "\n";
}

TrainedModel LoadModel(std::string_view payload, std::vector<std::string>* feature_names) {
  json doc;
  try {
    doc = json::parse(payload.begin(), payload.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptPayload, std::string("model file: ") + e.what());
  }
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw Error(ErrorCode::kSchemaVersionMismatch,
                  "model schema version " + std::to_string(version) + ", expected " +
                      std::to_string(kModelSchemaVersion));
    }
    TrainedModel model;
    model.spec = ModelSpecFromJson(doc.at("spec"));
    model.spec.Validate();
    model.input_scaler = ScalerFromJson(doc.at("scalers").at("input"));
    model.output_scaler = ScalerFromJson(doc.at("scalers").at("output"));
    for (const auto& item : doc.at("layers")) {
      const auto rows = item.at("rows").get<Eigen::Index>();
      const auto cols = item.at("cols").get<Eigen::Index>();
      const auto w = item.at("weights_row_major").get<std::vector<double>>();
      if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(w.size()) != rows * cols) {
        throw Error(ErrorCode::kCorruptPayload, "weights length does not match rows x cols");
      }
      Layer layer;
      layer.weights.resize(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) layer.weights(r, c) = w[r * cols + c];
      }
      layer.bias = ToVector(item.at("bias").get<std::vector<double>>());
      model.layers.push_back(std::move(layer));
    }
    for (const auto& item : doc.at("history")) {
      model.history.push_back({item.at("epoch").get<int>(), item.at("train_loss").get<double>(),
                               item.at("validation_mae").get<double>()});
    }
    model.best_epoch = doc.value("best_epoch", -1);
    if (feature_names) *feature_names = doc.value("features", std::vector<std::string>{});
    CheckShapes(model);
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptPayload, std::string("model file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaVersionMismatch || e.code() == ErrorCode::kCorruptPayload) {
      throw;
    }
    throw Error(ErrorCode::kCorruptPayload, std::string("model file: ") + e.what());
  }
}

void SaveModelFile(const std::filesystem::path& path, const TrainedModel& model,
                   const std::vector<std::string>& feature_names) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  file << SaveModel(model, feature_names);
}

TrainedModel LoadModelFile(const std::filesystem::path& path,
                           std::vector<std::string>* feature_names) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot open model " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return LoadModel(buffer.str(), feature_names);
}

}  // namespace epfx
