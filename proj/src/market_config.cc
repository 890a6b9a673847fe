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

#include "epfx/market_config.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "epfx/error.h"

namespace epfx {
namespace {

std::string Upper(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

SuperVariable Sv(Source source, int lag, std::string label) {
  return SuperVariable{source, lag, std::move(label)};
}

}  // namespace

std::string_view MarketName(MarketId market) {
  switch (market) {
    case MarketId::kDE: return "DE";
    case MarketId::kFR: return "FR";
    case MarketId::kBE: return "BE";
    case MarketId::kNP: return "NP";
    case MarketId::kPJM: return "PJM";
  }
  return "?";
}

MarketId ParseMarketId(std::string_view name) {
  const std::string upper = Upper(name);
  if (upper == "DE") return MarketId::kDE;
  if (upper == "FR") return MarketId::kFR;
  if (upper == "BE") return MarketId::kBE;
  if (upper == "NP") return MarketId::kNP;
  if (upper == "PJM") return MarketId::kPJM;
  throw Error(ErrorCode::kConfigError, "unknown market '" + std::string(name) + "'");
}

std::string_view SourceName(Source source) {
  switch (source) {
    case Source::kPrice: return "price";
    case Source::kExog1: return "exog1";
    case Source::kExog2: return "exog2";
  }
  return "?";
}

Source ParseSource(std::string_view name) {
  if (name == "price") return Source::kPrice;
  if (name == "exog1") return Source::kExog1;
  if (name == "exog2") return Source::kExog2;
  throw Error(ErrorCode::kConfigError, "unknown source '" + std::string(name) + "'");
}

int MarketConfig::FeatureCount() const {
  return 24 * static_cast<int>(super_variables.size()) + (include_day_of_week ? 1 : 0);
}

int MarketConfig::MaxLag() const {
  int lag = 0;
  for (const auto& sv : super_variables) lag = std::max(lag, sv.day_lag);
  return lag;
}

void MarketConfig::Validate() const {
  if (super_variables.empty()) {
    throw Error(ErrorCode::kConfigError, "market config has no super-variables");
  }
  std::set<std::string> labels;
  for (const auto& sv : super_variables) {
    if (sv.day_lag < 0) {
      throw Error(ErrorCode::kConfigError, "negative day lag for '" + sv.label + "'");
    }
    if (sv.label.empty() || sv.label == kDayOfWeekLabel) {
      throw Error(ErrorCode::kConfigError, "invalid super-variable label '" + sv.label + "'");
    }
    if (!labels.insert(sv.label).second) {
      throw Error(ErrorCode::kConfigError, "duplicate super-variable label '" + sv.label + "'");
    }
  }
}

MarketConfig DefaultMarketConfig(MarketId market) {
  MarketConfig config;
  switch (market) {
    case MarketId::kDE:
      // Exogenous 1: zonal load forecast; Exogenous 2: wind + solar forecast.
      config.super_variables = {
          Sv(Source::kPrice, 1, "Price D-1"),
          Sv(Source::kPrice, 2, "Price D-2"),
          Sv(Source::kPrice, 3, "Price D-3"),
          Sv(Source::kPrice, 7, "Price D-7"),
          Sv(Source::kExog1, 0, "Load Forecast D"),
          Sv(Source::kExog1, 1, "Load Forecast D-1"),
          Sv(Source::kExog1, 7, "Load Forecast D-7"),
          Sv(Source::kExog2, 0, "Renewable Forecast D"),
          Sv(Source::kExog2, 1, "Renewable Forecast D-1"),
      };
      config.include_day_of_week = true;
      break;
    case MarketId::kFR:
      config.super_variables = {
          Sv(Source::kPrice, 1, "Price D-1"),
          Sv(Source::kPrice, 3, "Price D-3"),
          Sv(Source::kExog1, 0, "Load Forecast D"),
          Sv(Source::kExog2, 0, "Generation Forecast D"),
          Sv(Source::kExog2, 1, "Generation Forecast D-1"),
      };
      break;
    case MarketId::kBE:
      config.super_variables = {
          Sv(Source::kPrice, 1, "Price D-1"),
          Sv(Source::kExog1, 0, "French Load Forecast D"),
          Sv(Source::kExog1, 7, "French Load Forecast D-7"),
          Sv(Source::kExog2, 0, "French Generation Forecast D"),
          Sv(Source::kExog2, 1, "French Generation Forecast D-1"),
      };
      config.include_day_of_week = true;
      break;
    case MarketId::kNP:
      config.super_variables = {
          Sv(Source::kPrice, 1, "Price D-1"),
          Sv(Source::kPrice, 2, "Price D-2"),
          Sv(Source::kExog1, 0, "Load Forecast D"),
          Sv(Source::kExog1, 1, "Load Forecast D-1"),
          Sv(Source::kExog2, 0, "Wind Generation Forecast D"),
          Sv(Source::kExog2, 1, "Wind Generation Forecast D-1"),
      };
      break;
    case MarketId::kPJM:
      // Exogenous 1: system-wide load forecast; Exogenous 2: ComEd zonal.
      config.super_variables = {
          Sv(Source::kPrice, 1, "Price D-1"),
          Sv(Source::kExog1, 0, "PJM Load Forecast D"),
          Sv(Source::kExog1, 1, "PJM Load Forecast D-1"),
          Sv(Source::kExog2, 0, "ComEd Load Forecast D"),
          Sv(Source::kExog2, 1, "ComEd Load Forecast D-1"),
      };
      config.currency = "USD/MWh";
      break;
  }
  return config;
}

nlohmann::json ToJson(const MarketConfig& config) {
  nlohmann::json svs = nlohmann::json::array();
  for (const auto& sv : config.super_variables) {
    svs.push_back({{"source", SourceName(sv.source)}, {"day_lag", sv.day_lag}, {"label", sv.label}});
  }
  return {{"super_variables", svs},
          {"include_day_of_week", config.include_day_of_week},
          {"currency", config.currency}};
}

MarketConfig MarketConfigFromJson(const nlohmann::json& json) {
  MarketConfig config;
  try {
    for (const auto& item : json.at("super_variables")) {
      config.super_variables.push_back(Sv(ParseSource(item.at("source").get<std::string>()),
                                          item.at("day_lag").get<int>(),
                                          item.at("label").get<std::string>()));
    }
    config.include_day_of_week = json.value("include_day_of_week", false);
    config.currency = json.value("currency", std::string("EUR/MWh"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("market config: ") + e.what());
  }
  config.Validate();
  return config;
}

}  // namespace epfx
