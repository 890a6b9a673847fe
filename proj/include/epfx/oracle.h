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

#ifndef EPFX_ORACLE_H_
#define EPFX_ORACLE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "epfx/mlp.h"
#include "json.hpp"

namespace epfx {

// Outcome of one family of cross-checks between independent computations.
struct OracleResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  double worst = 0.0;      // largest error statistic seen
  double tolerance = 0.0;  // bound the statistic was held to
  double seconds = 0.0;

  bool passed() const { return checks > 0 && failures == 0; }
};

nlohmann::json ToJson(const OracleResult& result);

// MLP with the given layer sizes, random biases and random (but valid)
// scalers, so every part of the price map is exercised.
TrainedModel RandomModel(const std::vector<int>& layer_sizes, Activation activation,
                         uint64_t seed);

// Sum of SHAP values against m(x) - baseline, and sum of SSHAP values
// against the sum of SHAP values, on `triples` random (model, instance,
// seed) draws cycling n_pairs through {1, 4, 64}. The statistic is the
// relative error |sum - target| / max(|m(x)|, |baseline|, sum |SHAP|).
OracleResult EfficiencyBattery(int triples, uint64_t seed);

// Monte-Carlo SHAP against exact enumeration on random MLPs with at most
// 10 features; a value fails when |mc - exact| > max(3 SE, 1e-6). The
// statistic is the largest |mc - exact| / SE.
OracleResult ShapExactBattery(int models, int n_pairs, uint64_t seed);

// Exact SHAP of linear maps against a_i (x_i - mean background x_i); the
// statistic is the largest absolute difference.
OracleResult LinearClosedFormBattery(int models, uint64_t seed);

// Analytic Jacobian against central differences with step `h` in normalised
// units on a random model of the given shape. The statistic per instance is
// max |fd - analytic| / max |analytic|.
OracleResult JacobianBattery(const std::vector<int>& layer_sizes, Activation activation,
                             int instances, double h, uint64_t seed);

// The batteries above at their default sizes.
std::vector<OracleResult> RunOracleSuite(uint64_t seed);

}  // namespace epfx

#endif  // EPFX_ORACLE_H_
