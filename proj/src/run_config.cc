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

#include "epfx/run_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "epfx/error.h"
#include "epfx/features.h"
#include "epfx/model_io.h"
#include "epfx/random.h"

namespace epfx {
namespace {

using nlohmann::json;

constexpr std::string_view kBasePartition = "super_variables";

enum SeedStream : uint64_t { kModelStream = 1, kTrainingStream, kBackgroundStream, kShapStream, kInstanceStream };

template <typename T>
void Read(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

void CheckKeys(const json& j, std::string_view section, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw Error(ErrorCode::kConfigError, std::string(section) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : keys) known |= key == k;
    if (!known) {
      throw Error(ErrorCode::kConfigError, "unknown key '" + key + "' in " + std::string(section));
    }
  }
}

Date ReadDate(const json& j) {
  Date date;
  const std::string text = j.get<std::string>();
  if (!ParseDate(text, &date)) throw Error(ErrorCode::kConfigError, "bad date '" + text + "'");
  return date;
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& text) {
  std::filesystem::path path(text);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kConfigError, message);
}

}  // namespace

std::string_view LineModeName(LineMode mode) {
  switch (mode) {
    case LineMode::kPooled: return "pooled";
    case LineMode::kHour: return "hour";
    case LineMode::kDailyMean: return "daily_mean";
  }
  return "?";
}

LineMode ParseLineMode(std::string_view name) {
  for (LineMode m : {LineMode::kPooled, LineMode::kHour, LineMode::kDailyMean}) {
    if (LineModeName(m) == name) return m;
  }
  throw Error(ErrorCode::kConfigError, "unknown line mode '" + std::string(name) + "'");
}

void RunConfig::SetSeed(uint64_t value) {
  seed = value;
  model.seed = DeriveSeed(seed, kModelStream);
  training.seed = DeriveSeed(seed, kTrainingStream);
}

uint64_t RunConfig::BackgroundSeed() const { return DeriveSeed(seed, kBackgroundStream); }
uint64_t RunConfig::ShapSeed() const { return DeriveSeed(seed, kShapStream); }
uint64_t RunConfig::InstanceSeed() const { return DeriveSeed(seed, kInstanceStream); }

void RunConfig::Validate() const {
  market_config.Validate();
  try {
    model.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  Require(model.num_inputs() == market_config.FeatureCount(),
          "model input size " + std::to_string(model.num_inputs()) + " differs from feature count " +
              std::to_string(market_config.FeatureCount()));
  Require(model.num_outputs() == kHoursPerDay, "model must have 24 outputs");
  training.Validate();
  Require(attribution.n_pairs >= 1, "attribution.n_pairs must be >= 1");
  Require(attribution.background_size >= 1, "attribution.background_size must be >= 1");
  Require(attribution.max_instances >= 0, "attribution.max_instances must be >= 0");
  const LineOptions& line = lines.options;
  Require(line.bandwidth > 0, "lines.bandwidth must be > 0");
  Require(line.grid_size >= 2, "lines.grid_size must be >= 2");
  Require(0 <= line.grid_low_percentile && line.grid_low_percentile < line.grid_high_percentile &&
              line.grid_high_percentile <= 100,
          "lines grid percentiles must satisfy 0 <= low < high <= 100");
  Require(0 <= lines.slope_band_low && lines.slope_band_low < lines.slope_band_high &&
              lines.slope_band_high <= 100,
          "lines slope band must satisfy 0 <= low < high <= 100");
  Require(line.hour >= 0 && line.hour < kHoursPerDay, "lines.hour must be in 0..23");
  Require(complexity_threshold >= 0, "complexity.threshold must be >= 0");
  Require(beeswarm_k >= 1, "beeswarm.k must be >= 1");
  Require(threads >= 1, "threads must be >= 1");
  if (train_start && train_end) Require(*train_start <= *train_end, "train_start after train_end");
  std::set<std::string> names{std::string(kBasePartition)};
  for (const auto& p : partitions) {
    Require(!p.name.empty(), "partition name must not be empty");
    Require(names.insert(p.name).second, "duplicate partition name '" + p.name + "'");
  }
  try {
    BuildPartitions(*this);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  if (dataset.empty()) throw Error(ErrorCode::kConfigError, "dataset path is required");
  if (!std::filesystem::is_regular_file(dataset)) {
    throw Error(ErrorCode::kIoError, "dataset not found: " + dataset.string());
  }
}

RunConfig RunConfigFromJson(const json& j, const std::filesystem::path& base_dir) {
  RunConfig config;
  try {
    CheckKeys(j, "config",
              {"market", "dataset", "train_start", "train_end", "market_config", "model", "training",
               "attribution", "partitions", "lines", "complexity", "beeswarm", "instances", "seed",
               "threads", "output"});
    config.market = ParseMarketId(j.at("market").get<std::string>());
    config.dataset = Resolve(base_dir, j.at("dataset").get<std::string>());
    if (j.contains("train_start")) config.train_start = ReadDate(j.at("train_start"));
    if (j.contains("train_end")) config.train_end = ReadDate(j.at("train_end"));
    config.market_config = j.contains("market_config") ? MarketConfigFromJson(j.at("market_config"))
                                                       : DefaultMarketConfig(config.market);

    json model = ModelSpecToJson(BenchmarkSpec(config.market));
    if (j.contains("model")) {
      CheckKeys(j.at("model"), "model",
                {"layer_sizes", "activation", "dropout_rate", "l1_factor", "init", "input_scaler",
                 "output_scaler"});
      model.update(j.at("model"));
    }
    config.model = ModelSpecFromJson(model);

    if (j.contains("training")) {
      const json& t = j.at("training");
      CheckKeys(t, "training",
                {"learning_rate", "batch_size", "max_epochs", "early_stop_patience",
                 "validation_fraction", "adam_beta1", "adam_beta2", "adam_epsilon"});
      Read(t, "learning_rate", &config.training.learning_rate);
      Read(t, "batch_size", &config.training.batch_size);
      Read(t, "max_epochs", &config.training.max_epochs);
      Read(t, "early_stop_patience", &config.training.early_stop_patience);
      Read(t, "validation_fraction", &config.training.validation_fraction);
      Read(t, "adam_beta1", &config.training.adam_beta1);
      Read(t, "adam_beta2", &config.training.adam_beta2);
      Read(t, "adam_epsilon", &config.training.adam_epsilon);
    }
    if (j.contains("attribution")) {
      const json& a = j.at("attribution");
      CheckKeys(a, "attribution", {"n_pairs", "antithetic", "background_size", "max_instances"});
      Read(a, "n_pairs", &config.attribution.n_pairs);
      Read(a, "antithetic", &config.attribution.antithetic);
      Read(a, "background_size", &config.attribution.background_size);
      Read(a, "max_instances", &config.attribution.max_instances);
    }
    if (j.contains("partitions")) {
      for (const json& p : j.at("partitions")) {
        CheckKeys(p, "partition", {"name", "merge", "split"});
        PartitionSpec spec;
        spec.name = p.at("name").get<std::string>();
        if (p.contains("merge")) {
          for (const json& m : p.at("merge")) {
            CheckKeys(m, "merge", {"label", "members"});
            spec.merges.push_back(
                {m.at("label").get<std::string>(), m.at("members").get<std::vector<std::string>>()});
          }
        }
        if (p.contains("split")) {
          for (const json& s : p.at("split")) {
            CheckKeys(s, "split", {"group", "hour"});
            spec.splits.push_back({s.at("group").get<std::string>(), s.at("hour").get<int>()});
          }
        }
        config.partitions.push_back(std::move(spec));
      }
    }
    if (j.contains("lines")) {
      const json& l = j.at("lines");
      CheckKeys(l, "lines",
                {"bandwidth", "grid_size", "grid_percentiles", "mode", "hour", "slope_band"});
      LineOptions& o = config.lines.options;
      Read(l, "bandwidth", &o.bandwidth);
      Read(l, "grid_size", &o.grid_size);
      Read(l, "hour", &o.hour);
      if (l.contains("mode")) o.mode = ParseLineMode(l.at("mode").get<std::string>());
      if (l.contains("grid_percentiles")) {
        const auto p = l.at("grid_percentiles").get<std::vector<double>>();
        Require(p.size() == 2, "lines.grid_percentiles needs two entries");
        o.grid_low_percentile = p[0];
        o.grid_high_percentile = p[1];
      }
      if (l.contains("slope_band")) {
        const auto p = l.at("slope_band").get<std::vector<double>>();
        Require(p.size() == 2, "lines.slope_band needs two entries");
        config.lines.slope_band_low = p[0];
        config.lines.slope_band_high = p[1];
      }
    }
    if (j.contains("complexity")) {
      CheckKeys(j.at("complexity"), "complexity", {"threshold"});
      Read(j.at("complexity"), "threshold", &config.complexity_threshold);
    }
    if (j.contains("beeswarm")) {
      CheckKeys(j.at("beeswarm"), "beeswarm", {"k"});
      Read(j.at("beeswarm"), "k", &config.beeswarm_k);
    }
    if (j.contains("instances")) {
      for (const json& d : j.at("instances")) config.instance_dates.push_back(ReadDate(d));
    }
    Read(j, "threads", &config.threads);
    if (j.contains("output")) config.output = Resolve(base_dir, j.at("output").get<std::string>());
    config.SetSeed(j.value("seed", uint64_t{0}));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("invalid config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    throw Error(ErrorCode::kConfigError, e.what());
  }
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::kConfigError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(file);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return RunConfigFromJson(j, std::filesystem::absolute(path).parent_path());
}

json ToJson(const RunConfig& config) {
  json model = ModelSpecToJson(config.model);
  model.erase("seed");
  json partitions = json::array();
  for (const auto& p : config.partitions) {
    json merges = json::array(), splits = json::array();
    for (const auto& m : p.merges) merges.push_back({{"label", m.label}, {"members", m.members}});
    for (const auto& s : p.splits) splits.push_back({{"group", s.group}, {"hour", s.hour}});
    partitions.push_back({{"name", p.name}, {"merge", merges}, {"split", splits}});
  }
  json instances = json::array();
  for (Date d : config.instance_dates) instances.push_back(FormatDate(d));
  const TrainingHyperparams& t = config.training;
  const LineOptions& l = config.lines.options;
  json j = {
      {"market", MarketName(config.market)},
      {"dataset", config.dataset.string()},
      {"market_config", ToJson(config.market_config)},
      {"model", model},
      {"training",
       {{"learning_rate", t.learning_rate},
        {"batch_size", t.batch_size},
        {"max_epochs", t.max_epochs},
        {"early_stop_patience", t.early_stop_patience},
        {"validation_fraction", t.validation_fraction},
        {"adam_beta1", t.adam_beta1},
        {"adam_beta2", t.adam_beta2},
        {"adam_epsilon", t.adam_epsilon}}},
      {"attribution",
       {{"n_pairs", config.attribution.n_pairs},
        {"antithetic", config.attribution.antithetic},
        {"background_size", config.attribution.background_size},
        {"max_instances", config.attribution.max_instances}}},
      {"partitions", partitions},
      {"lines",
       {{"bandwidth", l.bandwidth},
        {"grid_size", l.grid_size},
        {"grid_percentiles", {l.grid_low_percentile, l.grid_high_percentile}},
        {"mode", LineModeName(l.mode)},
        {"hour", l.hour},
        {"slope_band", {config.lines.slope_band_low, config.lines.slope_band_high}}}},
      {"complexity", {{"threshold", config.complexity_threshold}}},
      {"beeswarm", {{"k", config.beeswarm_k}}},
      {"instances", instances},
      {"seed", config.seed},
      {"threads", config.threads},
  };
  if (config.train_start) j["train_start"] = FormatDate(*config.train_start);
  if (config.train_end) j["train_end"] = FormatDate(*config.train_end);
  if (!config.output.empty()) j["output"] = config.output.string();
  return j;
}

std::vector<NamedPartition> BuildPartitions(const RunConfig& config) {
  const Partition base = SuperVariablePartition(FeatureLayout(config.market_config));
  std::vector<NamedPartition> out{{std::string(kBasePartition), base}};
  for (const auto& spec : config.partitions) {
    Partition p = base;
    for (const auto& m : spec.merges) p = MergeGroups(p, m.label, m.members);
    for (const auto& s : spec.splits) p = SplitGroup(p, s.group, s.hour);
    out.push_back({spec.name, std::move(p)});
  }
  return out;
}

}  // namespace epfx
