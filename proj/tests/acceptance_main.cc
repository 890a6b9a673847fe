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

// Acceptance checks, one PASS/FAIL/SKIP/WARN line per criterion.
//
//   epfx_acceptance [--only N]
//
// Criteria 5, 6 (trained part) and 7 need the benchmark CSVs (DE.csv, FR.csv,
// NP.csv) in $EPFX_DATA_DIR or <source>/data. Without them those checks exit
// with 77 so ctest reports them as skipped.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "epfx/complexity.h"
#include "epfx/error.h"
#include "epfx/explain.h"
#include "epfx/features.h"
#include "epfx/hashing.h"
#include "epfx/heatmap.h"
#include "epfx/market_config.h"
#include "epfx/mlp.h"
#include "epfx/oracle.h"
#include "epfx/partition.h"
#include "epfx/pipeline.h"
#include "epfx/random.h"
#include "epfx/shapley.h"
#include "epfx/sshap.h"
#include "epfx/sshap_line.h"
#include "support/synthetic_market.h"

namespace epfx {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kSkip = 77;
constexpr uint64_t kSeed = 20260101;

enum class Status { kPass, kFail, kSkip, kWarn };

struct Outcome {
  Status status;
  std::string detail;
};

void Print(const std::string& id, const std::string& title, const Outcome& o) {
  static const char* const kNames[] = {"PASS", "FAIL", "SKIP", "WARN"};
  std::cout << kNames[static_cast<int>(o.status)] << " criterion " << id << ": " << title << " | " << o.detail
            << std::endl;
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string OracleDetail(const OracleResult& r) {
  return r.name + " checks=" + std::to_string(r.checks) + " failures=" + std::to_string(r.failures) +
         Fmt(" worst=%.3g tolerance=%.3g time=%.1fs", r.worst, r.tolerance, r.seconds);
}

// ---- data-backed runs -------------------------------------------------------

std::optional<fs::path> DataDir() {
  if (const char* env = std::getenv("EPFX_DATA_DIR"); env && *env) return fs::path(env);
  return fs::path(EPFX_SOURCE_DIR) / "data";
}

std::optional<fs::path> Dataset(const std::string& market) {
  const fs::path p = *DataDir() / (market + ".csv");
  if (fs::exists(p)) return p;
  return std::nullopt;
}

fs::path WorkDir() {
  if (const char* env = std::getenv("EPFX_WORK_DIR"); env && *env) return env;
  return EPFX_WORK_DIR;
}

// Runs the shipped config for `market` on `dataset` into `out` unless a
// complete run is already there.
fs::path EnsureRun(const std::string& market, const fs::path& dataset, const fs::path& out,
                   const std::function<void(json&)>& adjust = {}) {
  std::string lower = market;
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  json config = json::parse(Slurp(fs::path(EPFX_SOURCE_DIR) / "configs" / (lower + ".json")));
  config["dataset"] = fs::absolute(dataset).string();
  config["output"] = fs::absolute(out).string();
  if (adjust) adjust(config);
  fs::create_directories(out.parent_path());
  const fs::path config_path = out.string() + ".config.json";
  const std::string text = config.dump(2);
  const bool same_config = fs::exists(config_path) && Slurp(config_path) == text;
  std::ofstream(config_path) << text;

  PipelineOptions options;
  options.config = config_path;
  std::ostringstream sink, err;
  if (same_config && RunCommand("report", options, sink, err) == 0) return out;
  fs::remove_all(out);
  if (RunCommand("run", options, sink, err) != 0) throw std::runtime_error(err.str());
  return out;
}

json ReadJson(const fs::path& path) { return json::parse(Slurp(path)); }

// ---- criteria ---------------------------------------------------------------

int Criterion1() {
  const OracleResult r = EfficiencyBattery(1000, kSeed);
  const bool ok = r.passed() && r.checks >= 2000 && r.seconds < 60;
  Print("1", "efficiency over 1000 (model, instance, seed) triples, rel err <= 1e-9, < 60 s",
        {ok ? Status::kPass : Status::kFail, OracleDetail(r)});
  return ok ? 0 : 1;
}

int Criterion2() {
  const OracleResult mc = ShapExactBattery(20, 2000, kSeed + 2);
  const OracleResult lin = LinearClosedFormBattery(50, kSeed + 3);
  const double seconds = mc.seconds + lin.seconds;
  const bool ok = mc.passed() && lin.passed() && seconds < 300;
  Print("2", "MC SHAP vs exact within max(3 SE, 1e-6); linear closed form to 1e-9; < 5 min",
        {ok ? Status::kPass : Status::kFail, OracleDetail(mc) + "; " + OracleDetail(lin)});
  return ok ? 0 : 1;
}

int Criterion3() {
  const ModelSpec fr = BenchmarkSpec(MarketId::kFR);
  const OracleResult r = JacobianBattery(fr.layer_sizes, fr.activation, 100, 1e-4, kSeed + 4);
  const bool ok = r.passed() && r.checks == 100 && r.seconds < 60;
  Print("3", "Jacobian vs central differences, FR-sized model, 100 instances, rel err <= 1e-5, < 1 min",
        {ok ? Status::kPass : Status::kFail, OracleDetail(r)});
  return ok ? 0 : 1;
}

int Criterion4() {
  const auto layout = FeatureLayout(DefaultMarketConfig(MarketId::kFR));
  TrainedModel model = RandomModel({120, 64, 32, 24}, Activation::kIdentity, kSeed + 5);
  model.output_scaler.kind = ScalerKind::kStd;
  model.input_scaler.kind = ScalerKind::kStd;
  FeatureMatrix data;
  data.columns = layout;
  data.values.resize(40, 120);
  data.targets = Eigen::MatrixXd::Zero(40, 24);
  Rng rng(kSeed + 6);
  for (Eigen::Index i = 0; i < data.values.size(); ++i) data.values(i) = 50 + 20 * rng.Normal();
  for (int r = 0; r < 40; ++r) data.dates.push_back(Date(std::chrono::days(16000 + r)));
  ExplainOptions options;
  options.n_pairs = 8;
  options.seed = kSeed + 7;
  const Explanation e = ExplainDataset(model, data, SampleBackground(data.values, 20, kSeed + 8), options);
  const double nl = NonLinearity(e.gradient);
  const double nh = NonHomogeneity(Heatmap(e.shap, HeatmapAggregation::kMeanAbs));
  const bool ok = nl == 0.0 && nh >= 0.0 && std::isfinite(nh);
  Print("4", "linear surrogate: non_linearity == 0 exactly, non_homogeneity >= 0",
        {ok ? Status::kPass : Status::kFail, Fmt("non_linearity=%.17g non_homogeneity=%.6g", nl, nh)});
  return ok ? 0 : 1;
}

int Criterion5() {
  const auto np = Dataset("NP"), de = Dataset("DE");
  if (!np || !de) {
    Print("5", "desk-scale training NP MAE <= 2.5, DE MAE <= 5.0, rMAE < 1, <= 30 min each",
          {Status::kSkip, "NP.csv/DE.csv not found in " + DataDir()->string()});
    return kSkip;
  }
  bool ok = true;
  std::string detail;
  for (const auto& [market, path, limit] :
       {std::tuple{"NP", *np, 2.5}, std::tuple{"DE", *de, 5.0}}) {
    const fs::path run = EnsureRun(market, path, WorkDir() / market);
    const json perf = ReadJson(run / "report.json").at("performance").at("training");
    const double train_seconds = ReadJson(run / "manifest.json").at("stages").at("train").at("seconds");
    const double mae = perf.at("mae"), rmae = perf.at("rmae");
    ok = ok && mae <= limit && rmae < 1.0 && train_seconds <= 1800;
    detail += std::string(detail.empty() ? "" : "; ") + market +
              Fmt(" mae=%.4g (limit %.2g) rmae=%.4g train=%.0fs", mae, limit, rmae, train_seconds);
  }
  Print("5", "desk-scale training NP MAE <= 2.5, DE MAE <= 5.0, rMAE < 1, <= 30 min each",
        {ok ? Status::kPass : Status::kFail, detail});
  return ok ? 0 : 1;
}

// Synthetic self-consistent setup: SSHAP values of each instance add up to
// price - baseline exactly, and prices sit on an even lattice wider than the
// checked band so the kernel sees the same neighbourhood at every grid point.
Outcome SyntheticSlope() {
  const auto layout = FeatureLayout(DefaultMarketConfig(MarketId::kFR));
  const int n = 1601;
  const double baseline = 37.5;
  AttributionTensor t = EmptyTensor(AttributionKind::kShap, layout, n);
  Eigen::MatrixXd actual(n, 24);
  Rng rng(kSeed + 9);
  for (int i = 0; i < n; ++i) {
    t.instance_ids[i] = std::to_string(i);
    for (int o = 0; o < 24; ++o) {
      actual(i, o) = -400.0 + 0.5 * i;
      double rest = actual(i, o) - baseline;
      for (int f = 0; f + 1 < t.num_features(); ++f) {
        const double v = rng.Normal();
        t.MutableInstance(i)(o, f) = v;
        rest -= v;
      }
      t.MutableInstance(i)(o, t.num_features() - 1) = rest;
      t.baseline(i, o) = baseline;
      t.prediction(i, o) = actual(i, o);
    }
  }
  const SshapTensor s = Aggregate(t, SplitGroup(SuperVariablePartition(layout), "Load Forecast D", 5));
  LineOptions options;
  const auto lines = SshapLines(s, actual, options, EvenGrid(-100, 100, 401));
  const SlopeCheckResult r = SlopeCheck(lines, baseline, -100, 100);
  const bool ok = r.max_deviation <= 1e-9 && std::abs(r.slope - 1.0) <= 1e-9;
  return {ok ? Status::kPass : Status::kFail,
          Fmt("slope=%.15g max_deviation=%.3g points=%.0f", r.slope, r.max_deviation, r.points)};
}

int Criterion6() {
  const Outcome a = SyntheticSlope();
  Print("6a", "synthetic self-consistent slope check, max deviation <= 1e-9, slope 1 +- 1e-9", a);
  const auto np = Dataset("NP");
  if (!np) {
    Print("6b", "trained NP model slope in [0.9, 1.1] over 5th-95th percentile band, < 10 min",
          {Status::kSkip, "NP.csv not found in " + DataDir()->string()});
    return a.status == Status::kPass ? kSkip : 1;
  }
  const fs::path run = EnsureRun("NP", *np, WorkDir() / "NP");
  const json explain = ReadJson(run / "report.json").at("explain");
  const json slope = explain.at("slope_checks").at("super_variables");
  const double explain_seconds = ReadJson(run / "manifest.json").at("stages").at("explain").at("seconds");
  bool ok = slope.contains("slope");
  std::string detail = slope.dump();
  if (ok) {
    const double s = slope.at("slope");
    ok = s >= 0.9 && s <= 1.1 && explain_seconds < 600;
    detail = Fmt("slope=%.4g band=[%.4g, %.4g] explain=%.0fs", s, slope.at("band")[0].get<double>(),
                 slope.at("band")[1].get<double>(), explain_seconds) +
             " instances=" + std::to_string(explain.at("instances").get<int>());
  }
  Print("6b", "trained NP model slope in [0.9, 1.1] over 5th-95th percentile band, < 10 min",
        {ok ? Status::kPass : Status::kFail, detail});
  return a.status == Status::kPass && ok ? 0 : 1;
}

// Rows of a CSV as string fields; no quoted fields are expected.
std::vector<std::vector<std::string>> ReadCsv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(Slurp(path));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream f(line);
    std::string field;
    while (std::getline(f, field, ',')) fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

double Correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

int Criterion7() {
  const auto de = Dataset("DE"), np = Dataset("NP"), fr = Dataset("FR");
  if (!de || !np || !fr) {
    Print("7", "qualitative patterns on trained DE/NP/FR models (warn-level)",
          {Status::kSkip, "DE.csv/NP.csv/FR.csv not found in " + DataDir()->string()});
    return kSkip;
  }
  std::vector<std::string> warnings;

  const json top = ReadJson(EnsureRun("DE", *de, WorkDir() / "DE") / "report.json")
                       .at("explain").at("beeswarm_top").at(0);
  const std::string feature = top.at("feature");
  const double mean_abs = top.at("mean_abs_shap");
  const bool a = feature == "Price D-1 H23" && mean_abs >= 0.505 && mean_abs <= 1.515;
  const std::string da = "top=" + feature + Fmt(" mean|SHAP|=%.4g", mean_abs);
  if (!a) warnings.push_back("7a");

  std::map<std::string, double> d0, d1;
  for (const auto& row : ReadCsv(EnsureRun("NP", *np, WorkDir() / "NP") / "tables" / "sshap_super_variables.csv")) {
    const std::string key = row[0] + "/" + row[1];
    if (row[2] == "Load Forecast D") d0[key] = std::stod(row[3]);
    if (row[2] == "Load Forecast D-1") d1[key] = std::stod(row[3]);
  }
  std::vector<double> x, y;
  for (const auto& [key, v] : d0) {
    x.push_back(v);
    y.push_back(d1.at(key));
  }
  const double corr = Correlation(x, y);
  const bool b = corr <= -0.5;
  if (!b) warnings.push_back("7b");

  int negative = 0, total = 0;
  for (const auto& row :
       ReadCsv(EnsureRun("FR", *fr, WorkDir() / "FR") / "tables" / "heatmap_gradient_mean.csv")) {
    if (row[0] != "Load Forecast D") continue;
    const int output = std::stoi(row[1]), input = std::stoi(row[2]);
    if (input < 5 && output >= 5) {
      ++total;
      if (std::stod(row[3]) < 0) ++negative;
    }
  }
  const double share = total ? static_cast<double>(negative) / total : 0.0;
  const bool c = share >= 0.8;
  if (!c) warnings.push_back("7c");

  std::string detail = "7a " + da + Fmt("; 7b corr=%.3g; 7c negative share=%.3g", corr, share);
  Print("7", "qualitative patterns on trained DE/NP/FR models (warn-level)",
        {warnings.empty() ? Status::kPass : Status::kWarn,
         detail + (warnings.empty() ? "" : " (soft misses: " + [&] {
           std::string s;
           for (const auto& w : warnings) s += (s.empty() ? "" : ",") + w;
           return s;
         }() + ")")});
  return 0;
}

int Criterion8() {
  const auto np = Dataset("NP");
  fs::path dataset;
  std::string source;
  std::function<void(json&)> adjust;
  if (np) {
    dataset = *np;
    source = "real NP data, default schedule";
  } else {
    // NP-shaped stand-in: same columns and feature layout, a short span and a
    // reduced schedule so the repeat stays quick.
    dataset = WorkDir() / "synthetic_np.csv";
    fs::create_directories(WorkDir());
    testing::WriteSyntheticMarket(dataset, Date(std::chrono::year{2013} / 1 / 1), 200, kSeed);
    source = "SYNTHETIC NP-shaped data (NP.csv absent), 200 days, 20 epochs, 40 instances";
    adjust = [](json& c) {
      c["training"]["max_epochs"] = 20;
      c["attribution"]["max_instances"] = 40;
    };
  }
  const fs::path a = EnsureRun("NP", dataset, WorkDir() / (np ? "NP" : "NP_synthetic"), adjust);
  const fs::path b = WorkDir() / (np ? "NP_repeat" : "NP_synthetic_repeat");
  fs::remove_all(b);
  EnsureRun("NP", dataset, b, adjust);
  bool ok = true;
  std::string detail = source;
  for (const char* file : {"model.json", "tables/shap.csv", "tables/gradient.csv"}) {
    const std::string ha = Sha256File(a / file), hb = Sha256File(b / file);
    ok = ok && ha == hb;
    detail += std::string("; ") + file + (ha == hb ? " identical " : " DIFFERS ") + ha.substr(0, 12);
  }
  Print("8", "determinism: repeated NP run gives byte-identical model and attribution CSVs",
        {ok ? Status::kPass : Status::kFail, detail});
  return ok ? 0 : 1;
}

}  // namespace
}  // namespace epfx

int main(int argc, char** argv) {
  const std::vector<std::function<int()>> criteria = {
      epfx::Criterion1, epfx::Criterion2, epfx::Criterion3, epfx::Criterion4,
      epfx::Criterion5, epfx::Criterion6, epfx::Criterion7, epfx::Criterion8};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "usage: epfx_acceptance [--only 1..8]\n";
    return 2;
  }
  int failures = 0, skips = 0;
  for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) {
    if (only && c != only) continue;
    int rc;
    try {
      rc = criteria[c - 1]();
    } catch (const std::exception& e) {
      std::cout << "FAIL criterion " << c << ": exception: " << e.what() << std::endl;
      rc = 1;
    }
    if (rc == epfx::kSkip) {
      ++skips;
    } else if (rc != 0) {
      ++failures;
    }
  }
  if (failures) return 1;
  return only && skips ? epfx::kSkip : 0;
}
