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

#ifndef EPFX_PIPELINE_H_
#define EPFX_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "epfx/error.h"
#include "epfx/features.h"
#include "epfx/metrics.h"
#include "epfx/mlp.h"
#include "epfx/run_config.h"
#include "epfx/series.h"

namespace epfx {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitDivergence = 4,
  kExitModelMismatch = 5,
  kExitIncompleteRun = 6,
};

int ExitCodeFor(ErrorCode code);
// Single line: epfx: error exit=<n> code=<name> message="<json-escaped>".
std::string ErrorLine(int exit_code, std::string_view code, std::string_view message);

// Command-line overrides; unset fields fall back to the config file.
struct PipelineOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<uint64_t> seed;
  std::optional<int> threads;
};

// Resolved config plus output directory. Throws kConfigError.
RunConfig ResolveConfig(const PipelineOptions& options);

struct IngestResult {
  HourlySeries series;
  FeatureMatrix all;    // every day with full history
  FeatureMatrix train;  // days inside the configured training window
  std::string dataset_sha256;
};

IngestResult Ingest(const RunConfig& config);

struct TrainOutcome {
  TrainedModel model;
  PerformanceReport training;    // whole training window
  PerformanceReport validation;  // held-out slice
};

TrainOutcome TrainStage(const RunConfig& config, const IngestResult& data);

// Runs one subcommand (validate, ingest, train, explain, report, run,
// oracle) and returns its exit code. Failures print ErrorLine to `err`.
int RunCommand(std::string_view command, const PipelineOptions& options, std::ostream& out,
               std::ostream& err);

}  // namespace epfx

#endif  // EPFX_PIPELINE_H_
