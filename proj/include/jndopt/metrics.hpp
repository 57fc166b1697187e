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

#ifndef JNDOPT_METRICS_HPP_
#define JNDOPT_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jndopt/image.hpp"
#include "jndopt/jnd.hpp"
#include "jndopt/loss.hpp"

namespace jndopt {

// Reported in place of +inf when the error term vanishes.
inline constexpr double kDbCap = 100.0;

// 10 log10(255^2 / mse), or kDbCap when mse < 255^2 * 1e-10.
double DbFromMse(double mse);

// Mean squared error over all channels, or over one channel.
double Mse(const ImageRgb& x, const ImageRgb& xhat,
           std::optional<Channel> channel = std::nullopt);

double Psnr(const ImageRgb& x, const ImageRgb& xhat,
            std::optional<Channel> channel = std::nullopt);

// 10 log10(255^2 / D) where D is the JND loss (mean reduction) under `spec`.
// The JND map must be derived from `x`; the metric is not symmetric.
double Pspnr(const ImageRgb& x, const ImageRgb& xhat, const JndMap& jnd,
             const AdjustorSpec& spec);

// 8 * bytes / (height * width). Throws Error(kDomain) on zero area.
double Bpp(std::uint64_t compressed_bytes, int height, int width);

struct MetricsRecord {
  double bpp = 0.0;
  double psnr = 0.0;
  double psnr_r = 0.0;
  double psnr_g = 0.0;
  double psnr_b = 0.0;
  double pspnr = 0.0;
  double loss_total = 0.0;
  double alpha = 0.0;
};

MetricsRecord EvaluatePair(const ImageRgb& x, const ImageRgb& xhat,
                           const JndMap& jnd, const AdjustorSpec& spec,
                           std::uint64_t compressed_bytes);

struct LabeledRecord {
  std::string label;
  MetricsRecord record;
};

enum class CurveMetric { kPspnr, kPsnr, kPsnrR, kPsnrG, kPsnrB };

double SelectMetric(const MetricsRecord& record, CurveMetric metric);

struct CurvePoint {
  double bpp = 0.0;
  double value = 0.0;
};

struct CurveSet {
  std::string label;
  std::vector<CurvePoint> points;  // strictly increasing bpp
};

// One curve per label, labels in lexicographic order. Records sharing a
// label and an identical bpp are averaged into one point.
std::vector<CurveSet> BuildCurves(const std::vector<LabeledRecord>& records,
                                  CurveMetric metric = CurveMetric::kPspnr);

}  // namespace jndopt

#endif  // JNDOPT_METRICS_HPP_
