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

#include "epfx/series.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "epfx/error.h"

namespace epfx {
namespace {

using std::chrono::hours;
using std::chrono::seconds;

std::string_view Trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    text = text.substr(1, text.size() - 2);
  }
  return text;
}

bool ParseInt(std::string_view text, int* out) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

bool ParseDouble(std::string_view text, double* out) {
  text = Trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, *out);
  return ec == std::errc() && ptr == end && std::isfinite(*out);
}

struct Row {
  Timestamp ts;
  double price;
  double exog1;
  double exog2;
};

}  // namespace

std::string FormatDate(Date date) {
  const std::chrono::year_month_day ymd(date);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string FormatTimestamp(Timestamp ts) {
  const Date day = std::chrono::floor<std::chrono::days>(ts);
  const auto secs = (ts - day).count();
  char buf[16];
  std::snprintf(buf, sizeof(buf), " %02lld:%02lld:%02lld", static_cast<long long>(secs / 3600),
                static_cast<long long>(secs / 60 % 60), static_cast<long long>(secs % 60));
  return FormatDate(day) + buf;
}

bool ParseDate(std::string_view text, Date* out) {
  text = Trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  int y, m, d;
  if (!ParseInt(text.substr(0, 4), &y) || !ParseInt(text.substr(5, 2), &m) ||
      !ParseInt(text.substr(8, 2), &d)) {
    return false;
  }
  const std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(m),
                                        std::chrono::day(d)};
  if (!ymd.ok()) return false;
  *out = Date(ymd);
  return true;
}

bool ParseTimestamp(std::string_view text, Timestamp* out) {
  text = Trim(text);
  Date date;
  if (text.size() < 10 || !ParseDate(text.substr(0, 10), &date)) return false;
  if (text.size() == 10) {
    *out = Timestamp(date);
    return true;
  }
  if (text[10] != ' ' && text[10] != 'T') return false;
  const std::string_view clock = text.substr(11);
  int hh = 0, mm = 0, ss = 0;
  if (clock.size() == 5 && clock[2] == ':') {
    if (!ParseInt(clock.substr(0, 2), &hh) || !ParseInt(clock.substr(3, 2), &mm)) return false;
  } else if (clock.size() == 8 && clock[2] == ':' && clock[5] == ':') {
    if (!ParseInt(clock.substr(0, 2), &hh) || !ParseInt(clock.substr(3, 2), &mm) ||
        !ParseInt(clock.substr(6, 2), &ss)) {
      return false;
    }
  } else {
    return false;
  }
  if (hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 59) return false;
  *out = Timestamp(date) + hours(hh) + std::chrono::minutes(mm) + seconds(ss);
  return true;
}

const std::vector<double>& HourlySeries::column(Source source) const {
  switch (source) {
    case Source::kPrice: return price;
    case Source::kExog1: return exog1;
    case Source::kExog2: return exog2;
  }
  return price;
}

HourlySeries ParseMarketCsv(std::istream& input, MarketId market) {
  std::string line;
  if (!std::getline(input, line)) {
    throw Error(ErrorCode::kEmptyInput, "input has no header row");
  }
  std::vector<Row> rows;
  int line_number = 1;
  while (std::getline(input, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const size_t comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    Row row;
    if (fields.size() != 4 || !ParseTimestamp(fields[0], &row.ts) ||
        !ParseDouble(fields[1], &row.price) || !ParseDouble(fields[2], &row.exog1) ||
        !ParseDouble(fields[3], &row.exog2)) {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_number) + ": cannot parse '" + line + "'");
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "input has no data rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.ts < b.ts; });

  HourlySeries series;
  series.market = market;
  auto push = [&series](Timestamp ts, double p, double e1, double e2) {
    series.timestamps.push_back(ts);
    series.price.push_back(p);
    series.exog1.push_back(e1);
    series.exog2.push_back(e2);
  };

  for (size_t i = 0; i < rows.size();) {
    size_t j = i;
    double p = 0, e1 = 0, e2 = 0;
    while (j < rows.size() && rows[j].ts == rows[i].ts) {
      p += rows[j].price;
      e1 += rows[j].exog1;
      e2 += rows[j].exog2;
      ++j;
    }
    const double n = static_cast<double>(j - i);
    const Timestamp ts = rows[i].ts;
    if ((ts.time_since_epoch() % hours(1)) != seconds(0)) {
      throw Error(ErrorCode::kNonHourlyCadence, "timestamp " + FormatTimestamp(ts) +
                                                    " is not on a whole hour");
    }
    if (!series.timestamps.empty()) {
      const auto gap = ts - series.timestamps.back();
      if (gap == hours(2)) {
        push(series.timestamps.back() + hours(1), 0.5 * (series.price.back() + p / n),
             0.5 * (series.exog1.back() + e1 / n), 0.5 * (series.exog2.back() + e2 / n));
      } else if (gap != hours(1)) {
        throw Error(ErrorCode::kNonHourlyCadence,
                    "gap of " + std::to_string(gap.count() / 3600.0) + " h before " +
                        FormatTimestamp(ts));
      }
    }
    push(ts, p / n, e1 / n, e2 / n);
    i = j;
  }
  return series;
}

HourlySeries ParseMarketCsv(std::string_view text, MarketId market) {
  std::istringstream stream{std::string(text)};
  return ParseMarketCsv(stream, market);
}

HourlySeries LoadMarketCsv(const std::filesystem::path& path, MarketId market) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::kIoError, "cannot open dataset " + path.string());
  return ParseMarketCsv(file, market);
}

}  // namespace epfx
