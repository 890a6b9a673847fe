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

#include "epfx/pipeline.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "epfx/beeswarm.h"
#include "epfx/complexity.h"
#include "epfx/explain.h"
#include "epfx/hashing.h"
#include "epfx/heatmap.h"
#include "epfx/model_io.h"
#include "epfx/oracle.h"
#include "epfx/random.h"
#include "epfx/render.h"
#include "epfx/shapley.h"
#include "epfx/sshap.h"
#include "epfx/sshap_line.h"
#include "epfx/text.h"
#include "epfx/train.h"

namespace epfx {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::string_view kManifest = "manifest.json";
constexpr std::string_view kReport = "report.json";
constexpr std::string_view kModelFile = "model.json";
constexpr std::string_view kSummary = "summary.md";

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string ReadFile(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  return text.str();
}

// Output tree of one run: figures/, tables/, report.json, manifest.json.
class RunDirectory {
 public:
  explicit RunDirectory(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }
  bool Exists(std::string_view relative) const { return fs::is_regular_file(root_ / relative); }

  void Write(std::string_view relative, std::string_view content) const {
    const fs::path path = root_ / relative;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    file << content;
    if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }

  json ReadJson(std::string_view relative) const {
    try {
      return json::parse(ReadFile(root_ / relative));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kIncompleteRun, std::string(relative) + " is not valid JSON");
    }
  }

  void WriteJson(std::string_view relative, const json& value) const {
    Write(relative, value.dump(2) + "\n");
  }

  void WriteFigure(const std::string& stem, const Figure& figure) const {
    Write("figures/" + stem + ".svg", figure.svg);
    Write("tables/" + stem + ".csv", figure.csv);
  }

  void UpdateReport(const std::string& key, json value) const {
    json report = Exists(kReport) ? ReadJson(kReport) : json::object();
    report[key] = std::move(value);
    WriteJson(kReport, report);
  }

  // Every file except the manifest, keyed by its generic relative path.
  json OutputHashes() const {
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root_)) {
      if (!entry.is_regular_file()) continue;
      const std::string relative = entry.path().lexically_relative(root_).generic_string();
      if (relative != kManifest) files.push_back(relative);
    }
    std::sort(files.begin(), files.end());
    json hashes = json::object();
    for (const auto& f : files) hashes[f] = Sha256File(root_ / f);
    return hashes;
  }

  void UpdateManifest(const RunConfig* config, const std::string* dataset_hash,
                      std::string_view stage, double seconds) const {
    json manifest = Exists(kManifest) ? ReadJson(kManifest) : json::object();
    manifest["tool"] = "epfx";
    manifest["version"] = kToolVersion;
    if (config) {
      manifest["config"] = ToJson(*config);
      manifest["seeds"] = {{"run", config->seed},
                           {"model", config->model.seed},
                           {"training", config->training.seed},
                           {"background", config->BackgroundSeed()},
                           {"shap", config->ShapSeed()},
                           {"instances", config->InstanceSeed()}};
    }
    if (dataset_hash && config) {
      manifest["inputs"]["dataset"] = {{"path", config->dataset.string()}, {"sha256", *dataset_hash}};
    }
    manifest["stages"][std::string(stage)] = {{"seconds", seconds}};
    manifest["outputs"] = OutputHashes();
    WriteJson(kManifest, manifest);
  }

 private:
  fs::path root_;
};

std::vector<std::string> FeatureNames(const std::vector<FeatureId>& features) {
  std::vector<std::string> names;
  for (const auto& f : features) names.push_back(f.Name());
  return names;
}

std::string ConfigSummary(std::string_view command, const RunConfig& config) {
  return json{{"command", command}, {"status", "ok"}, {"market", MarketName(config.market)},
              {"output", config.output.string()}}
      .dump();
}

// Price observations that define the grid and slope band in a line mode.
std::vector<double> ModePrices(const Eigen::MatrixXd& actual, const LineOptions& options) {
  std::vector<double> prices;
  switch (options.mode) {
    case LineMode::kPooled:
      prices.assign(actual.data(), actual.data() + actual.size());
      break;
    case LineMode::kHour:
      for (Eigen::Index i = 0; i < actual.rows(); ++i) prices.push_back(actual(i, options.hour));
      break;
    case LineMode::kDailyMean:
      for (Eigen::Index i = 0; i < actual.rows(); ++i) prices.push_back(actual.row(i).mean());
      break;
  }
  return prices;
}

void WriteSshapCsv(std::ostream& out, const SshapTensor& sshap) {
  out << "instance_id,output_hour,group,value\n";
  const auto labels = sshap.partition.Labels();
  for (int i = 0; i < sshap.instances(); ++i) {
    for (int o = 0; o < sshap.outputs; ++o) {
      for (int g = 0; g < sshap.num_groups(); ++g) {
        out << CsvField(sshap.instance_ids[i]) << ',' << o << ',' << CsvField(labels[g]) << ','
            << FormatNumber(sshap.at(i, o, g)) << '\n';
      }
    }
  }
}

fs::path OutputRoot(const RunConfig& config) {
  if (config.output.empty()) {
    throw Error(ErrorCode::kConfigError, "no output directory: pass --out or set \"output\"");
  }
  return config.output;
}

// ---- train -----------------------------------------------------------------

json PerformanceJson(const RunConfig& config, const IngestResult& data, const TrainOutcome& outcome) {
  return {{"currency", config.market_config.currency},
          {"training", ToJson(outcome.training)},
          {"validation", ToJson(outcome.validation)},
          {"training_instances", data.train.rows()},
          {"validation_instances", ValidationRows(data.train.rows(), config.training.validation_fraction)},
          {"first_day", FormatDate(data.train.dates.front())},
          {"last_day", FormatDate(data.train.dates.back())},
          {"epochs", static_cast<int>(outcome.model.history.size())},
          {"best_epoch", outcome.model.best_epoch},
          {"parameter_count", outcome.model.ParameterCount()}};
}

void CommandTrain(const RunConfig& config, std::ostream& out) {
  Stopwatch watch;
  RunDirectory dir(OutputRoot(config));
  const IngestResult data = Ingest(config);
  const TrainOutcome outcome = TrainStage(config, data);
  fs::create_directories(dir.root());
  SaveModelFile(dir.root() / kModelFile, outcome.model, FeatureNames(data.train.columns));
  std::ostringstream history;
  history << "epoch,train_loss,validation_mae\n";
  for (const auto& r : outcome.model.history) {
    history << r.epoch << ',' << FormatNumber(r.train_loss) << ',' << FormatNumber(r.validation_mae) << '\n';
  }
  dir.Write("tables/training_history.csv", history.str());
  dir.UpdateReport("market", MarketName(config.market));
  dir.UpdateReport("performance", PerformanceJson(config, data, outcome));
  dir.UpdateManifest(&config, &data.dataset_sha256, "train", watch.Seconds());
  out << json{{"command", "train"},
              {"status", "ok"},
              {"mae", outcome.training.mae},
              {"rmae", outcome.training.rmae},
              {"output", dir.root().string()}}
             .dump()
      << '\n';
}

// ---- explain ---------------------------------------------------------------

TrainedModel LoadCheckedModel(const RunConfig& config, const fs::path& path,
                              const std::vector<FeatureId>& layout) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kModelConfigMismatch, "model file not found: " + path.string());
  }
  std::vector<std::string> names;
  TrainedModel model;
  try {
    model = LoadModelFile(path, &names);
  } catch (const Error& e) {
    throw Error(ErrorCode::kModelConfigMismatch, std::string(ErrorCodeName(e.code())) + ": " + e.what());
  }
  if (model.spec.layer_sizes != config.model.layer_sizes) {
    throw Error(ErrorCode::kModelConfigMismatch, "model layer sizes differ from the config");
  }
  if (!names.empty() && names != FeatureNames(layout)) {
    throw Error(ErrorCode::kModelConfigMismatch, "model feature layout differs from the config");
  }
  return model;
}

// Sampled training days plus the configured instance dates, in date order.
FeatureMatrix ExplainedInstances(const RunConfig& config, const IngestResult& data) {
  std::vector<int> window;
  std::set<Date> train_days(data.train.dates.begin(), data.train.dates.end());
  for (int r = 0; r < data.all.rows(); ++r) {
    if (train_days.count(data.all.dates[r])) window.push_back(r);
  }
  const int limit = config.attribution.max_instances;
  if (limit > 0 && limit < static_cast<int>(window.size())) {
    Rng rng(config.InstanceSeed());
    rng.Shuffle(std::span<int>(window));
    window.resize(limit);
  }
  std::set<int> rows(window.begin(), window.end());
  for (Date d : config.instance_dates) {
    auto it = std::find(data.all.dates.begin(), data.all.dates.end(), d);
    if (it == data.all.dates.end()) {
      throw Error(ErrorCode::kConfigError, "instance date " + FormatDate(d) + " has no feature row");
    }
    rows.insert(static_cast<int>(it - data.all.dates.begin()));
  }
  return SelectRows(data.all, std::vector<int>(rows.begin(), rows.end()));
}

double MaxEfficiencyError(const AttributionTensor& shap) {
  double worst = 0.0;
  for (int i = 0; i < shap.instances(); ++i) {
    const auto values = shap.Instance(i);
    for (int o = 0; o < shap.outputs; ++o) {
      const double target = shap.prediction(i, o) - shap.baseline(i, o);
      const double scale = std::max({std::abs(shap.prediction(i, o)), std::abs(shap.baseline(i, o)),
                                     values.row(o).cwiseAbs().sum()});
      if (scale > 0) worst = std::max(worst, std::abs(values.row(o).sum() - target) / scale);
    }
  }
  return worst;
}

void CommandExplain(const RunConfig& config, std::ostream& out) {
  Stopwatch watch;
  RunDirectory dir(OutputRoot(config));
  const IngestResult data = Ingest(config);
  const TrainedModel model = LoadCheckedModel(config, dir.root() / kModelFile, data.all.columns);
  const FeatureMatrix instances = ExplainedInstances(config, data);
  const BackgroundSet background =
      SampleBackground(data.train.values, config.attribution.background_size, config.BackgroundSeed());

  ExplainOptions options;
  options.n_pairs = config.attribution.n_pairs;
  options.antithetic = config.attribution.antithetic;
  options.seed = config.ShapSeed();
  options.threads = config.threads;
  const Explanation explanation = ExplainDataset(model, instances, background, options);
  const AttributionTensor& shap = explanation.shap;
  const AttributionTensor& gradient = explanation.gradient;
  const std::string unit = config.market_config.currency;
  const std::string grad_unit = unit + " per normalised input unit";

  {
    std::ostringstream s, g;
    WriteAttributionCsv(s, shap);
    WriteAttributionCsv(g, gradient);
    dir.Write("tables/shap.csv", s.str());
    dir.Write("tables/gradient.csv", g.str());
    dir.WriteJson("tables/baseline.json", BaselineJson(shap));
  }

  json report;
  report["instances"] = shap.instances();
  report["n_pairs"] = config.attribution.n_pairs;
  report["antithetic"] = config.attribution.antithetic;
  report["background_size"] = background.size();
  const Eigen::VectorXd mean_baseline = shap.MeanBaseline();
  report["mean_baseline"] = std::vector<double>(mean_baseline.begin(), mean_baseline.end());
  report["efficiency_max_relative_error"] = MaxEfficiencyError(shap);

  const HeatmapGrid shap_map = Heatmap(shap, HeatmapAggregation::kMeanAbs);
  dir.WriteFigure("heatmap_shap_mean_abs", RenderHeatmap(shap_map, "Mean |SHAP|", unit));
  const HeatmapGrid grad_abs = Heatmap(gradient, HeatmapAggregation::kMeanAbs);
  dir.WriteFigure("heatmap_gradient_mean_abs", RenderHeatmap(grad_abs, "Mean |gradient|", grad_unit));
  const HeatmapGrid grad_mean = Heatmap(gradient, HeatmapAggregation::kMean);
  dir.WriteFigure("heatmap_gradient_mean", RenderHeatmap(grad_mean, "Mean gradient", grad_unit));
  report["heatmap_blocks"] = {{"shap", shap_map.blocks.size()}, {"gradient", grad_abs.blocks.size()}};

  try {
    report["complexity"] =
        ToJson(ComplexityMetrics(gradient, shap_map, config.complexity_threshold));
    report["complexity"]["threshold"] = config.complexity_threshold;
  } catch (const Error& e) {
    report["complexity"] = {{"error", e.what()}};
  }

  const auto bees = BeeswarmTable(shap, instances.values, config.beeswarm_k);
  dir.WriteFigure("beeswarm", RenderBeeswarm(bees, "SHAP beeswarm", unit));
  json top = json::array();
  for (const auto& row : bees) top.push_back({{"feature", row.feature.Name()}, {"mean_abs_shap", row.mean_abs_shap}});
  report["beeswarm_top"] = top;

  const LineOptions& line_options = config.lines.options;
  const std::vector<double> grid = LineGrid(instances.targets, line_options);
  // The check compares against one baseline, so every point must share it.
  // Pooled points mix output hours whose baselines differ; use daily means.
  LineOptions slope_options = line_options;
  if (slope_options.mode == LineMode::kPooled) slope_options.mode = LineMode::kDailyMean;
  const std::vector<double> slope_prices = ModePrices(instances.targets, slope_options);
  const double band_low = Percentile(slope_prices, config.lines.slope_band_low);
  const double band_high = Percentile(slope_prices, config.lines.slope_band_high);
  const std::vector<double> slope_grid = LineGrid(instances.targets, slope_options);

  json partitions = json::object(), slopes = json::object();
  for (const auto& [name, partition] : BuildPartitions(config)) {
    const SshapTensor sshap = Aggregate(shap, partition);
    std::ostringstream csv;
    WriteSshapCsv(csv, sshap);
    dir.Write("tables/sshap_" + name + ".csv", csv.str());
    const auto labels = partition.Labels();
    partitions[name] = labels;

    dir.WriteFigure("hourly_importance_" + name,
                    RenderHourlyImportance(HourlyImportance(sshap), labels,
                                           "Mean |SSHAP| by output hour (" + name + ")", unit));
    const auto lines = SshapLines(sshap, instances.targets, line_options, grid);
    dir.WriteFigure("sshap_lines_" + name,
                    RenderLines(lines, "SSHAP lines (" + name + ")", unit));

    const Eigen::VectorXd b = sshap.MeanBaseline();
    const double baseline = slope_options.mode == LineMode::kHour ? b(slope_options.hour) : b.mean();
    try {
      const auto slope_lines = slope_options.mode == line_options.mode
                                   ? lines
                                   : SshapLines(sshap, instances.targets, slope_options, slope_grid);
      const SlopeCheckResult slope = SlopeCheck(slope_lines, baseline, band_low, band_high);
      slopes[name] = {{"slope", slope.slope},
                      {"intercept", slope.intercept},
                      {"max_deviation", slope.max_deviation},
                      {"points", slope.points},
                      {"baseline", baseline},
                      {"band", {band_low, band_high}},
                      {"mode", LineModeName(slope_options.mode)}};
    } catch (const Error& e) {
      slopes[name] = {{"error", e.what()}};
    }

    for (Date d : config.instance_dates) {
      const std::string id = FormatDate(d);
      const auto it = std::find(sshap.instance_ids.begin(), sshap.instance_ids.end(), id);
      const int index = static_cast<int>(it - sshap.instance_ids.begin());
      dir.WriteFigure("instance_" + id + "_" + name,
                      RenderInstanceStack(sshap, index, "SSHAP explanation for " + id + " (" + name + ")", unit));
    }
  }
  report["partitions"] = partitions;
  report["slope_checks"] = slopes;
  report["line_mode"] = LineModeName(line_options.mode);

  dir.UpdateReport("market", MarketName(config.market));
  dir.UpdateReport("explain", report);
  dir.UpdateManifest(&config, &data.dataset_sha256, "explain", watch.Seconds());
  out << json{{"command", "explain"}, {"status", "ok"}, {"instances", shap.instances()},
              {"output", dir.root().string()}}
             .dump()
      << '\n';
}

// ---- report ----------------------------------------------------------------

std::string Cell(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.is_number() ? FormatNumber(value.get<double>(), 6) : "n/a";
}

std::vector<std::string> ListFiles(const fs::path& dir, std::string_view extension) {
  std::vector<std::string> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) {
      files.push_back(entry.path().filename().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

void CommandReport(const fs::path& root, std::ostream& out) {
  Stopwatch watch;
  RunDirectory dir(root);
  if (!dir.Exists(kManifest)) {
    throw Error(ErrorCode::kIncompleteRun, "no manifest.json in " + root.string());
  }
  if (!dir.Exists(kReport)) throw Error(ErrorCode::kIncompleteRun, "no report.json in " + root.string());
  const json manifest = dir.ReadJson(kManifest);
  if (!manifest.contains("outputs") || !manifest.at("outputs").is_object()) {
    throw Error(ErrorCode::kIncompleteRun, "manifest.json lists no outputs");
  }
  for (const auto& [file, hash] : manifest.at("outputs").items()) {
    if (file == kSummary) continue;
    if (!dir.Exists(file)) throw Error(ErrorCode::kIncompleteRun, "missing output " + file);
    if (Sha256File(root / file) != hash.get<std::string>()) {
      throw Error(ErrorCode::kIncompleteRun, "output " + file + " changed after the run");
    }
  }
  const json report = dir.ReadJson(kReport);

  std::ostringstream md;
  md << "# Run summary: " << report.value("market", "?") << "\n\n";
  md << "Produced by epfx " << kToolVersion << ". Every number below is read from report.json.\n\n";

  md << "## Forecast accuracy\n\n";
  if (report.contains("performance")) {
    const json& p = report.at("performance");
    md << "Prices in " << p.value("currency", "") << "; sMAPE and rMAE are ratios. Training window "
       << p.value("first_day", "") << " to " << p.value("last_day", "") << ".\n\n";
    md << "| Set | MAE | rMAE | sMAPE | RMSE |\n|---|---|---|---|---|\n";
    for (const char* set : {"training", "validation"}) {
      const json& m = p.at(set);
      md << "| " << set << " | " << Cell(m.at("mae")) << " | " << Cell(m.at("rmae")) << " | "
         << Cell(m.at("smape")) << " | " << Cell(m.at("rmse")) << " |\n";
    }
    md << '\n';
  } else {
    md << "Not run.\n\n";
  }

  md << "## Model complexity\n\n";
  if (report.contains("explain") && report.at("explain").contains("complexity") &&
      report.at("explain").at("complexity").contains("non_linearity")) {
    const json& c = report.at("explain").at("complexity");
    md << "| Non-linearity | Non-homogeneity | Important variables per hour |\n|---|---|---|\n";
    md << "| " << Cell(c.at("non_linearity")) << " | " << Cell(c.at("non_homogeneity")) << " | "
       << Cell(c.at("important_vars_per_hour")) << " |\n\n";
    md << "Threshold " << Cell(c.at("threshold")) << " price units.\n\n";
  } else {
    md << "Not run.\n\n";
  }

  if (report.contains("explain")) {
    md << "## Slope of summed SSHAP lines\n\n| Partition | Mode | Slope | Max deviation | Points |\n|---|---|---|---|---|\n";
    for (const auto& [name, s] : report.at("explain").at("slope_checks").items()) {
      md << "| " << name << " | " << Cell(s.value("mode", json())) << " | " << Cell(s.value("slope", json()))
         << " | "
         << Cell(s.value("max_deviation", json())) << " | " << Cell(s.value("points", json())) << " |\n";
    }
    md << '\n';
  }

  const auto figures = ListFiles(root / "figures", ".svg");
  md << "## Figures\n\n";
  for (const auto& f : figures) {
    const std::string stem = fs::path(f).stem().string();
    md << "### " << stem << "\n\n![" << stem << "](figures/" << f << ")\n\nData: [tables/" << stem
       << ".csv](tables/" << stem << ".csv)\n\n";
  }
  md << "## Tables\n\n";
  for (const auto& ext : {".csv", ".json"}) {
    for (const auto& t : ListFiles(root / "tables", ext)) md << "- [tables/" << t << "](tables/" << t << ")\n";
  }
  dir.Write(kSummary, md.str());
  dir.UpdateManifest(nullptr, nullptr, "report", watch.Seconds());
  out << json{{"command", "report"}, {"status", "ok"}, {"figures", figures.size()},
              {"summary", (root / kSummary).string()}}
             .dump()
      << '\n';
}

// ---- oracle ----------------------------------------------------------------

int CommandOracle(uint64_t seed, const fs::path& root, std::ostream& out) {
  const auto results = RunOracleSuite(seed);
  bool ok = true;
  json doc = {{"seed", seed}, {"batteries", json::array()}};
  for (const auto& r : results) {
    ok &= r.passed();
    doc["batteries"].push_back(ToJson(r));
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << " checks=" << r.checks
        << " failures=" << r.failures << " worst=" << FormatNumber(r.worst, 6)
        << " tolerance=" << FormatNumber(r.tolerance, 6) << '\n';
  }
  if (!root.empty()) RunDirectory(root).WriteJson("oracle.json", doc);
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kPartitionMismatch:
    case ErrorCode::kUnknownGroup:
    case ErrorCode::kNotHourlyGroup:
      return kExitConfig;
    case ErrorCode::kMalformedRow:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kNonHourlyCadence:
    case ErrorCode::kInsufficientHistory:
    case ErrorCode::kTooFewRows:
    case ErrorCode::kTooFewInstances:
    case ErrorCode::kNonFiniteInput:
    case ErrorCode::kZeroNaiveError:
    case ErrorCode::kEmptyData:
    case ErrorCode::kIoError:
      return kExitData;
    case ErrorCode::kDivergedLoss:
    case ErrorCode::kNonFiniteModelOutput:
      return kExitDivergence;
    case ErrorCode::kModelConfigMismatch:
    case ErrorCode::kSchemaVersionMismatch:
    case ErrorCode::kCorruptPayload:
      return kExitModelMismatch;
    case ErrorCode::kIncompleteRun:
      return kExitIncompleteRun;
    default:
      return kExitFailure;
  }
}

std::string ErrorLine(int exit_code, std::string_view code, std::string_view message) {
  return "epfx: error exit=" + std::to_string(exit_code) + " code=" + std::string(code) +
         " message=" + json(std::string(message)).dump();
}

RunConfig ResolveConfig(const PipelineOptions& options) {
  if (options.config.empty()) throw Error(ErrorCode::kConfigError, "--config is required");
  RunConfig config = LoadRunConfig(options.config);
  if (options.seed) config.SetSeed(*options.seed);
  if (options.threads) config.threads = *options.threads;
  if (!options.out.empty()) config.output = fs::absolute(options.out).lexically_normal();
  return config;
}

IngestResult Ingest(const RunConfig& config) {
  IngestResult result;
  result.dataset_sha256 = Sha256File(config.dataset);
  result.series = LoadMarketCsv(config.dataset, config.market);
  result.all = BuildFeatureMatrix(result.series, config.market_config);
  std::vector<int> rows;
  for (int r = 0; r < result.all.rows(); ++r) {
    const Date d = result.all.dates[r];
    if (config.train_start && d < *config.train_start) continue;
    if (config.train_end && d > *config.train_end) continue;
    rows.push_back(r);
  }
  if (rows.empty()) throw Error(ErrorCode::kInsufficientHistory, "no instances inside the training window");
  result.train = SelectRows(result.all, rows);
  return result;
}

TrainOutcome TrainStage(const RunConfig& config, const IngestResult& data) {
  TrainOutcome outcome;
  outcome.model = Train(InitModel(config.model), data.train, config.training);
  const Eigen::MatrixXd predicted = PredictPricesRows(outcome.model, data.train.values);
  const Eigen::MatrixXd naive = NaiveForecastFor(data.series, data.train.dates);
  outcome.training = PerformanceMetrics(predicted, data.train.targets, naive);
  const int n_val = ValidationRows(data.train.rows(), config.training.validation_fraction);
  outcome.validation = PerformanceMetrics(predicted.bottomRows(n_val), data.train.targets.bottomRows(n_val),
                                          naive.bottomRows(n_val));
  return outcome;
}

int RunCommand(std::string_view command, const PipelineOptions& options, std::ostream& out,
               std::ostream& err) {
  try {
    if (command == "oracle") {
      uint64_t seed = options.seed.value_or(0);
      fs::path root = options.out;
      if (!options.config.empty()) {
        const RunConfig config = ResolveConfig(options);
        seed = config.seed;
        root = config.output;
      }
      return CommandOracle(seed, root, out);
    }
    if (command == "report") {
      fs::path root = options.out;
      if (root.empty()) root = OutputRoot(ResolveConfig(options));
      CommandReport(root, out);
      return kExitOk;
    }
    const RunConfig config = ResolveConfig(options);
    config.Validate();
    if (command == "validate") {
      out << json{{"command", "validate"}, {"status", "ok"}, {"market", MarketName(config.market)},
                  {"features", config.market_config.FeatureCount()}, {"config", ToJson(config)}}
                 .dump()
          << '\n';
    } else if (command == "ingest") {
      Stopwatch watch;
      RunDirectory dir(OutputRoot(config));
      const IngestResult data = Ingest(config);
      dir.WriteJson("tables/ingest.json",
                    {{"market", MarketName(config.market)},
                     {"hours", data.series.size()},
                     {"first_timestamp", FormatTimestamp(data.series.timestamps.front())},
                     {"last_timestamp", FormatTimestamp(data.series.timestamps.back())},
                     {"feature_rows", data.all.rows()},
                     {"training_rows", data.train.rows()},
                     {"features", data.all.cols()},
                     {"dataset_sha256", data.dataset_sha256}});
      dir.UpdateManifest(&config, &data.dataset_sha256, "ingest", watch.Seconds());
      out << ConfigSummary("ingest", config) << '\n';
    } else if (command == "train") {
      CommandTrain(config, out);
    } else if (command == "explain") {
      CommandExplain(config, out);
    } else if (command == "run") {
      CommandTrain(config, out);
      CommandExplain(config, out);
      CommandReport(config.output, out);
    } else {
      throw Error(ErrorCode::kConfigError, "unknown command '" + std::string(command) + "'");
    }
    return kExitOk;
  } catch (const Error& e) {
    const int code = ExitCodeFor(e.code());
    err << ErrorLine(code, ErrorCodeName(e.code()), e.what()) << '\n';
    return code;
  } catch (const std::exception& e) {
    err << ErrorLine(kExitFailure, "Internal", e.what()) << '\n';
    return kExitFailure;
  }
}

}  // namespace epfx
