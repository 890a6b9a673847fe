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

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "epfx/pipeline.h"

namespace {

constexpr const char* kCommands[][2] = {
    {"validate", "Check a run config and its dataset path"},
    {"ingest", "Parse the dataset and build the feature matrix"},
    {"train", "Train the forecaster and write model.json and accuracy metrics"},
    {"explain", "Compute SHAP, gradients, SSHAP values, figures and tables"},
    {"report", "Write summary.md for a finished run directory"},
    {"run", "train, explain and report in sequence"},
    {"oracle", "Run the exact-Shapley and finite-difference cross-checks"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explainable day-ahead electricity price forecasting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(epfx::kToolVersion));

  epfx::PipelineOptions options;
  std::string config, out;
  uint64_t seed = 0;
  int threads = 0;
  for (const auto& [name, help] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Run config (JSON)");
    sub->add_option("--out", out, "Output directory (overrides EPFX_OUT and the config)");
    sub->add_option("--seed", seed, "Base seed (overrides the config)");
    sub->add_option("--threads", threads, "Worker threads (overrides EPFX_THREADS)")
        ->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << epfx::ErrorLine(epfx::kExitConfig, "UsageError", e.what()) << '\n';
    return epfx::kExitConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  options.config = config;
  if (!out.empty()) {
    options.out = out;
  } else if (const char* env = std::getenv("EPFX_OUT"); env && *env) {
    options.out = env;
  }
  if (sub->count("--seed")) options.seed = seed;
  if (sub->count("--threads")) {
    options.threads = threads;
  } else if (const char* env = std::getenv("EPFX_THREADS"); env && *env) {
    try {
      options.threads = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << epfx::ErrorLine(epfx::kExitConfig, "ConfigError", "EPFX_THREADS is not an integer")
                << '\n';
      return epfx::kExitConfig;
    }
  }
  return epfx::RunCommand(sub->get_name(), options, std::cout, std::cerr);
}
