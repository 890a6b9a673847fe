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

#ifndef EPFX_TESTS_SUPPORT_SYNTHETIC_MARKET_H_
#define EPFX_TESTS_SUPPORT_SYNTHETIC_MARKET_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "epfx/series.h"

namespace epfx::testing {

// Hourly CSV in the benchmark layout for `days` days from `first_day`.
// Prices follow load and wind forecasts plus yesterday's price and noise,
// so a small network can learn them.
std::string SyntheticMarketCsv(Date first_day, int days, uint64_t seed);

void WriteSyntheticMarket(const std::filesystem::path& path, Date first_day, int days,
                          uint64_t seed);

// Fresh empty directory under the system temp path.
std::filesystem::path MakeTempDir(const std::string& prefix);

}  // namespace epfx::testing

#endif  // EPFX_TESTS_SUPPORT_SYNTHETIC_MARKET_H_
