// Copyright (c) the jndopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jndopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "jndopt/error.hpp"

namespace jndopt {
namespace {

using nlohmann::json;

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV line; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(Trim(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(Trim(field));
  return fields;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

void EnsureDirectory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

std::string DumpJson(const json& j) { return j.dump(2) + "\n"; }

json RecordJson(const MetricsRecord& r) {
  return {{"bpp", r.bpp},     {"psnr", r.psnr},   {"psnr_r", r.psnr_r},
          {"psnr_g", r.psnr_g}, {"psnr_b", r.psnr_b}, {"pspnr", r.pspnr},
          {"loss_total", r.loss_total}, {"alpha", r.alpha}};
}

MetricsRecord MeanRecord(const std::vector<const MetricsRecord*>& records) {
  MetricsRecord m;
  for (const MetricsRecord* r : records) {
    m.bpp += r->bpp;
    m.psnr += r->psnr;
    m.psnr_r += r->psnr_r;
    m.psnr_g += r->psnr_g;
    m.psnr_b += r->psnr_b;
    m.pspnr += r->pspnr;
    m.loss_total += r->loss_total;
    m.alpha += r->alpha;
  }
  const double n = static_cast<double>(records.size());
  m.bpp /= n;
  m.psnr /= n;
  m.psnr_r /= n;
  m.psnr_g /= n;
  m.psnr_b /= n;
  m.pspnr /= n;
  m.loss_total /= n;
  m.alpha /= n;
  return m;
}

JndMap JndFor(const RunConfig& config, const ImageRgb& original,
              const std::filesystem::path& original_path,
              const std::optional<std::filesystem::path>& jnd_dir) {
  if (jnd_dir) {
    const auto map_path =
        *jnd_dir / (original_path.stem().string() + ".jndm");
    return LoadJndMap(map_path, original.shape(), config.t_floor);
  }
  return ComputeJndMap(original, config.weights, config.t_floor);
}

MetricsRecord EvaluateEntry(const RunConfig& config, const ManifestEntry& entry,
                            const std::optional<std::filesystem::path>& jnd_dir) {
  if (entry.original.stem() != entry.reconstruction.stem()) {
    Fail(ErrorCode::kFormat, "stems differ: " + entry.original.string() +
                                 " vs " + entry.reconstruction.string());
  }
  const ImageRgb x = LoadPng(entry.original);
  const ImageRgb xhat = LoadPng(entry.reconstruction);
  if (x.shape() != xhat.shape()) {
    Fail(ErrorCode::kShapeMismatch,
         "reconstruction size differs from original for " +
             entry.reconstruction.string());
  }
  const JndMap jnd = JndFor(config, x, entry.original, jnd_dir);
  return EvaluatePair(x, xhat, jnd, config.adjustor, entry.bytes);
}

}  // namespace

void RunConfig::Validate() const {
  if (jobs < 1) Fail(ErrorCode::kDomain, "jobs must be at least 1");
  if (!(t_floor > 0.0)) Fail(ErrorCode::kDomain, "t-floor must be positive");
}

std::string FormatFixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open manifest " + path.string());
  const std::filesystem::path base = path.parent_path();
  std::string line;
  if (!std::getline(in, line)) {
    Fail(ErrorCode::kFormat, "manifest " + path.string() + " is empty");
  }
  const auto header = SplitCsvLine(line);
  if (header != std::vector<std::string>{"original", "reconstruction", "bytes",
                                         "label"}) {
    Fail(ErrorCode::kFormat,
         "manifest header must be original,reconstruction,bytes,label");
  }
  std::vector<ManifestEntry> entries;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsvLine(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != 4) {
      Fail(ErrorCode::kFormat, where + ": expected 4 fields");
    }
    ManifestEntry entry;
    entry.original = base / fields[0];
    entry.reconstruction = base / fields[1];
    try {
      std::size_t used = 0;
      const long long bytes = std::stoll(fields[2], &used);
      if (used != fields[2].size() || bytes < 0) throw std::invalid_argument("");
      entry.bytes = static_cast<std::uint64_t>(bytes);
    } catch (const std::exception&) {
      Fail(ErrorCode::kFormat, where + ": bytes must be a nonnegative integer");
    }
    entry.label = fields[3];
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string FormatMetricsCsv(const std::vector<EvalRow>& rows) {
  std::string out = kMetricsCsvHeader;
  out += "\n";
  for (const EvalRow& row : rows) {
    const MetricsRecord& r = row.record;
    out += CsvField(row.label) + "," + CsvField(row.image);
    for (double v : {r.bpp, r.psnr, r.psnr_r, r.psnr_g, r.psnr_b, r.pspnr,
                     r.loss_total, r.alpha}) {
      out += "," + FormatFixed(v);
    }
    out += "\n";
  }
  return out;
}

std::string FormatCurvesCsv(const std::vector<LabeledRecord>& records) {
  std::string out = "label,metric,bpp,value\n";
  const std::pair<const char*, CurveMetric> metrics[] = {
      {"pspnr", CurveMetric::kPspnr},   {"psnr", CurveMetric::kPsnr},
      {"psnr_r", CurveMetric::kPsnrR}, {"psnr_g", CurveMetric::kPsnrG},
      {"psnr_b", CurveMetric::kPsnrB},
  };
  for (const auto& [name, metric] : metrics) {
    for (const CurveSet& curve : BuildCurves(records, metric)) {
      for (const CurvePoint& p : curve.points) {
        out += CsvField(curve.label) + "," + name + "," + FormatFixed(p.bpp) +
               "," + FormatFixed(p.value) + "\n";
      }
    }
  }
  return out;
}

std::string LossReportJson(const LossReport& report) {
  const json j = {{"total", report.total},
                  {"alpha", report.adjustor.alpha},
                  {"ratio", report.adjustor.ratio},
                  {"height", report.per_pixel.shape.height},
                  {"width", report.per_pixel.shape.width},
                  {"channels", report.per_pixel.shape.channels}};
  return DumpJson(j);
}

void SaveChannelMap(const ChannelMap& map, const std::filesystem::path& path) {
  std::vector<float> values(map.values.begin(), map.values.end());
  WriteMapFile(path, {map.shape.height, map.shape.width, map.shape.channels},
               values);
}

void RunJnd(const RunConfig& config, const JndCommand& cmd) {
  config.Validate();
  const ImageRgb img = LoadPng(cmd.input);
  const JndMap map = ComputeJndMap(img, config.weights, config.t_floor);
  SaveJndMap(map, cmd.output);
  if (cmd.visualization) {
    const auto t = map.thresholds();
    const double peak = *std::max_element(t.begin(), t.end());
    std::vector<double> vis(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      vis[i] = std::min(kMaxPixel, t[i] / peak * kMaxPixel);
    }
    SavePng(ImageRgb(img.height(), img.width(), std::move(vis)),
            *cmd.visualization);
  }
}

EvalOutcome RunEval(const RunConfig& config, const EvalCommand& cmd) {
  config.Validate();
  const std::vector<ManifestEntry> entries = ReadManifest(cmd.manifest);

  // Each slot is written by exactly one worker; merged in manifest order.
  std::vector<std::optional<MetricsRecord>> results(entries.size());
  std::vector<std::string> errors(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        results[i] = EvaluateEntry(config, entries[i], cmd.jnd_dir);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int workers = std::max(
      1, std::min(config.jobs, static_cast<int>(entries.size())));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  EvalOutcome outcome;
  std::vector<std::string> label_order;
  std::vector<LabeledRecord> labeled;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!results[i]) {
      outcome.failures.push_back(entries[i].reconstruction.string() + ": " +
                                 errors[i]);
      continue;
    }
    const std::string& label = entries[i].label;
    if (std::find(label_order.begin(), label_order.end(), label) ==
        label_order.end()) {
      label_order.push_back(label);
    }
    outcome.rows.push_back(
        {label, entries[i].reconstruction.stem().string(), *results[i]});
    labeled.push_back({label, *results[i]});
  }
  const std::size_t per_image_rows = outcome.rows.size();
  for (const std::string& label : label_order) {
    std::vector<const MetricsRecord*> group;
    for (std::size_t i = 0; i < per_image_rows; ++i) {
      if (outcome.rows[i].label == label) group.push_back(&outcome.rows[i].record);
    }
    outcome.rows.push_back({label, "mean", MeanRecord(group)});
  }

  WriteText(cmd.output_csv, FormatMetricsCsv(outcome.rows));
  if (cmd.curves_csv) {
    WriteText(*cmd.curves_csv,
              labeled.empty() ? std::string("label,metric,bpp,value\n")
                              : FormatCurvesCsv(labeled));
  }
  return outcome;
}

AssignReport RunAssign(const RunConfig& config, const AssignCommand& cmd) {
  config.Validate();
  const ImageRgb x = LoadPng(cmd.input);
  const JndMap jnd = ComputeJndMap(x, config.weights, config.t_floor);
  AssignConfig assign;
  assign.target_mse = cmd.target_mse;
  assign.max_iters = cmd.iters;
  assign.step_size = cmd.step_size;
  assign.seed = config.seed;
  assign.adjustor = config.adjustor;
  AssignReport report = AssignDistortion(x, jnd, assign);

  EnsureDirectory(cmd.out_dir);
  SavePng(report.xhat, cmd.out_dir / "assigned.png");

  json trajectory = json::array();
  for (const TrajectoryPoint& p : report.trajectory) {
    trajectory.push_back({{"iteration", p.iteration},
                          {"loss_total", p.loss_total},
                          {"alpha", p.alpha},
                          {"mse", p.mse}});
  }
  const json traj_doc = {
      {"input", cmd.input.filename().string()},
      {"config",
       {{"target_mse", assign.target_mse},
        {"max_iters", assign.max_iters},
        {"step_size", assign.step_size},
        {"seed", assign.seed},
        {"adjustor", assign.adjustor.ToString()}}},
      {"trajectory", trajectory}};
  WriteText(cmd.out_dir / "trajectory.json", DumpJson(traj_doc));

  const RegionStats& s = report.region_stats;
  const json stats_doc = {
      {"quartile_mean_abs", s.quartile_mean_abs},
      {"channel_mean_abs",
       {{"r", s.channel_mean_abs[0]},
        {"g", s.channel_mean_abs[1]},
        {"b", s.channel_mean_abs[2]}}},
      {"concentration_ratio", s.concentration_ratio},
      {"metrics", RecordJson(EvaluatePair(x, report.xhat, jnd, config.adjustor,
                                          0))}};
  WriteText(cmd.out_dir / "region_stats.json", DumpJson(stats_doc));
  return report;
}

void RunInject(const RunConfig& config, const InjectCommand& cmd) {
  config.Validate();
  const ImageRgb x = LoadPng(cmd.input);
  const JndMap jnd = ComputeJndMap(x, config.weights, config.t_floor);
  const ImageRgb xhat = InjectJndNoise(x, jnd, cmd.k, config.seed);

  const auto xs = x.values();
  const auto t = jnd.thresholds();
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double unclamped = xs[i] + cmd.k * t[i];
    const double lower = xs[i] - cmd.k * t[i];
    // Either sign may have been drawn; count entries whose draw was clipped.
    const double drawn = xhat.values()[i];
    if ((drawn >= xs[i] && unclamped > kMaxPixel) ||
        (drawn <= xs[i] && lower < 0.0)) {
      ++clamped;
    }
  }

  EnsureDirectory(cmd.out_dir);
  const auto png_path = cmd.out_dir / "injected.png";
  SavePng(xhat, png_path);
  const ImageRgb stored = LoadPng(png_path);
  const AdjustorSpec fixed_k = AdjustorSpec::Fixed(cmd.k);
  const json doc = {
      {"input", cmd.input.filename().string()},
      {"k", cmd.k},
      {"seed", config.seed},
      {"psnr", Psnr(x, xhat)},
      {"pspnr", Pspnr(x, xhat, jnd, fixed_k)},
      {"psnr_png", Psnr(x, stored)},
      {"pspnr_png", Pspnr(x, stored, jnd, fixed_k)},
      {"clamped_fraction",
       static_cast<double>(clamped) / static_cast<double>(xs.size())}};
  WriteText(cmd.out_dir / "metrics.json", DumpJson(doc));
}

}  // namespace jndopt
