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

#ifndef JNDOPT_HARNESS_HPP_
#define JNDOPT_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jndopt/assign.hpp"
#include "jndopt/jnd.hpp"
#include "jndopt/loss.hpp"
#include "jndopt/metrics.hpp"

namespace jndopt {

struct RunConfig {
  AdjustorSpec adjustor = AdjustorSpec::DistortionAware();
  ChannelWeights weights;
  double t_floor = kDefaultThresholdFloor;
  std::uint64_t seed = 0;
  int jobs = 1;

  void Validate() const;
};

struct ManifestEntry {
  std::filesystem::path original;
  std::filesystem::path reconstruction;
  std::uint64_t bytes = 0;
  std::string label;
};

// CSV with header "original,reconstruction,bytes,label". Relative paths are
// resolved against the manifest's directory.
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path);

struct EvalRow {
  std::string label;
  std::string image;  // reconstruction stem, or "mean" for summary rows
  MetricsRecord record;
};

struct EvalOutcome {
  std::vector<EvalRow> rows;          // manifest order, then one mean per label
  std::vector<std::string> failures;  // one message per skipped pair
};

inline constexpr const char* kMetricsCsvHeader =
    "label,image,bpp,psnr,psnr_r,psnr_g,psnr_b,pspnr,loss_total,alpha";

std::string FormatMetricsCsv(const std::vector<EvalRow>& rows);
std::string FormatCurvesCsv(const std::vector<LabeledRecord>& records);

// Fixed six-decimal rendering used by every text artifact.
std::string FormatFixed(double v);

// Scalars of a loss evaluation as a JSON object.
std::string LossReportJson(const LossReport& report);
// Per-entry map (loss or gradient) in the JND-map binary container.
void SaveChannelMap(const ChannelMap& map, const std::filesystem::path& path);

struct JndCommand {
  std::filesystem::path input;
  std::filesystem::path output;
  std::optional<std::filesystem::path> visualization;
};
void RunJnd(const RunConfig& config, const JndCommand& cmd);

struct EvalCommand {
  std::filesystem::path manifest;
  std::filesystem::path output_csv;
  std::optional<std::filesystem::path> curves_csv;
  // Directory of <original stem>.jndm maps used instead of the classical model.
  std::optional<std::filesystem::path> jnd_dir;
};
// Pairs are evaluated on config.jobs workers; output does not depend on it.
EvalOutcome RunEval(const RunConfig& config, const EvalCommand& cmd);

struct AssignCommand {
  std::filesystem::path input;
  std::filesystem::path out_dir;
  double target_mse = 25.0;
  int iters = 500;
  double step_size = 0.5;
};
// Writes assigned.png, trajectory.json and region_stats.json.
AssignReport RunAssign(const RunConfig& config, const AssignCommand& cmd);

struct InjectCommand {
  std::filesystem::path input;
  std::filesystem::path out_dir;
  double k = 10.0;
};
// Writes injected.png and metrics.json.
void RunInject(const RunConfig& config, const InjectCommand& cmd);

}  // namespace jndopt

#endif  // JNDOPT_HARNESS_HPP_
