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

#ifndef EPFX_MODEL_IO_H_
#define EPFX_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "epfx/mlp.h"
#include "json.hpp"

namespace epfx {

inline constexpr int kModelSchemaVersion = 1;

nlohmann::json ModelSpecToJson(const ModelSpec& spec);
// Throws nlohmann::json exceptions on missing fields.
ModelSpec ModelSpecFromJson(const nlohmann::json& json);

// Versioned JSON document:
//   {schema_version, spec, scalers:{input, output},
//    layers:[{rows, cols, weights_row_major, bias}], history, best_epoch,
//    features}
// Doubles are written with shortest round-trip precision, so a reloaded
// model predicts bit-identically.
std::string SaveModel(const TrainedModel& model,
                      const std::vector<std::string>& feature_names = {});
// Throws kCorruptPayload or kSchemaVersionMismatch.
TrainedModel LoadModel(std::string_view payload, std::vector<std::string>* feature_names = nullptr);

void SaveModelFile(const std::filesystem::path& path, const TrainedModel& model,
                   const std::vector<std::string>& feature_names = {});
TrainedModel LoadModelFile(const std::filesystem::path& path,
                           std::vector<std::string>* feature_names = nullptr);

}  // namespace epfx

#endif  // EPFX_MODEL_IO_H_
