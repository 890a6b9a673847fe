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

#ifndef EPFX_RUN_CONFIG_H_
#define EPFX_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epfx/market_config.h"
#include "epfx/mlp.h"
#include "epfx/partition.h"
#include "epfx/series.h"
#include "epfx/sshap_line.h"
#include "epfx/train.h"
#include "json.hpp"

namespace epfx {

struct AttributionSettings {
  int n_pairs = 64;
  bool antithetic = true;
  int background_size = 100;
  // Explained training instances, sampled without replacement; 0 = all.
  int max_instances = 200;
};

struct MergeSpec {
  std::string label;
  std::vector<std::string> members;
};

struct SplitSpec {
  std::string group;
  int hour = 0;
};

// A partition derived from the super-variable partition: merges first, then
// splits, each in listed order.
struct PartitionSpec {
  std::string name;
  std::vector<MergeSpec> merges;
  std::vector<SplitSpec> splits;
};

struct LineSettings {
  LineOptions options;
  double slope_band_low = 5.0;  // percentiles of the actual prices
  double slope_band_high = 95.0;
};

// Everything one run needs. Seeds of the individual stages are derived from
// `seed`.
struct RunConfig {
  MarketId market = MarketId::kNP;
  std::filesystem::path dataset;  // absolute after loading
  std::optional<Date> train_start;
  std::optional<Date> train_end;
  MarketConfig market_config;
  ModelSpec model;
  TrainingHyperparams training;
  AttributionSettings attribution;
  std::vector<PartitionSpec> partitions;
  LineSettings lines;
  double complexity_threshold = 0.5;
  int beeswarm_k = 20;
  std::vector<Date> instance_dates;
  uint64_t seed = 0;
  int threads = 1;
  std::filesystem::path output;  // absolute after loading; may be empty

  // Sets the top-level seed and re-derives the model and training seeds.
  void SetSeed(uint64_t value);
  uint64_t BackgroundSeed() const;
  uint64_t ShapSeed() const;
  uint64_t InstanceSeed() const;

  // Throws kConfigError for out-of-range settings, and kIoError when the
  // dataset does not exist.
  void Validate() const;
};

// Relative paths are resolved against `base_dir`. Missing sections take the
// market defaults. Throws kConfigError.
RunConfig RunConfigFromJson(const nlohmann::json& json, const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);
nlohmann::json ToJson(const RunConfig& config);

// Super-variable partition with every PartitionSpec applied, keyed by name;
// the plain partition comes first under "super_variables".
struct NamedPartition {
  std::string name;
  Partition partition;
};
std::vector<NamedPartition> BuildPartitions(const RunConfig& config);

std::string_view LineModeName(LineMode mode);
LineMode ParseLineMode(std::string_view name);

}  // namespace epfx

#endif  // EPFX_RUN_CONFIG_H_
