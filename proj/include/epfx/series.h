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

#ifndef EPFX_SERIES_H_
#define EPFX_SERIES_H_

#include <chrono>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "epfx/market_config.h"

namespace epfx {

// Wall-clock instants of the market's local time, stored on the sys_seconds
// axis without any zone conversion.
using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

std::string FormatDate(Date date);
std::string FormatTimestamp(Timestamp ts);
// "YYYY-MM-DD", "YYYY-MM-DD HH:MM[:SS]" or "YYYY-MM-DDTHH:MM[:SS]".
bool ParseTimestamp(std::string_view text, Timestamp* out);
bool ParseDate(std::string_view text, Date* out);

// Hourly price plus two exogenous forecasts for one market. Timestamps are
// strictly increasing with a one hour step.
struct HourlySeries {
  MarketId market = MarketId::kDE;
  std::vector<Timestamp> timestamps;
  std::vector<double> price;
  std::vector<double> exog1;
  std::vector<double> exog2;

  size_t size() const { return timestamps.size(); }
  const std::vector<double>& column(Source source) const;
};

// Parses the benchmark CSV layout: a header row, then
// timestamp,price,exogenous 1,exogenous 2 per line. Rows are sorted, repeated
// hours (autumn DST) are averaged and single missing hours (spring DST) are
// linearly interpolated.
HourlySeries ParseMarketCsv(std::istream& input, MarketId market);
HourlySeries ParseMarketCsv(std::string_view text, MarketId market);
HourlySeries LoadMarketCsv(const std::filesystem::path& path, MarketId market);

}  // namespace epfx

#endif  // EPFX_SERIES_H_
