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

#ifndef EPFX_MARKET_CONFIG_H_
#define EPFX_MARKET_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace epfx {

enum class MarketId { kDE, kFR, kBE, kNP, kPJM };

std::string_view MarketName(MarketId market);
// Accepts "DE", "FR", "BE", "NP", "PJM" (case-insensitive).
MarketId ParseMarketId(std::string_view name);

// Which column of the market CSV a super-variable reads from.
enum class Source { kPrice, kExog1, kExog2 };

std::string_view SourceName(Source source);
Source ParseSource(std::string_view name);

// A block of 24 hourly inputs: one source series lagged by whole days.
struct SuperVariable {
  Source source = Source::kPrice;
  int day_lag = 0;
  std::string label;
};

struct MarketConfig {
  std::vector<SuperVariable> super_variables;
  bool include_day_of_week = false;
  std::string currency = "EUR/MWh";

  // 24 per super-variable, plus one calendar column when enabled.
  int FeatureCount() const;
  int MaxLag() const;
  // Throws kConfigError on duplicate labels, negative lags or no inputs.
  void Validate() const;
};

inline constexpr std::string_view kDayOfWeekLabel = "Day of week";

// Input layouts of the five benchmark models.
MarketConfig DefaultMarketConfig(MarketId market);

nlohmann::json ToJson(const MarketConfig& config);
MarketConfig MarketConfigFromJson(const nlohmann::json& json);

}  // namespace epfx

#endif  // EPFX_MARKET_CONFIG_H_
