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

#include "jndopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "jndopt/error.hpp"

namespace jndopt {

double DbFromMse(double mse) {
  constexpr double kPeak = kMaxPixel * kMaxPixel;
  if (!(mse >= kPeak * 1e-10)) return kDbCap;
  return 10.0 * std::log10(kPeak / mse);
}

double Mse(const ImageRgb& x, const ImageRgb& xhat,
           std::optional<Channel> channel) {
  if (x.shape() != xhat.shape()) {
    Fail(ErrorCode::kShapeMismatch, "mse: image shapes differ");
  }
  if (!channel) return MseObjective(x, xhat);
  const auto a = x.values();
  const auto b = xhat.values();
  const std::size_t c = static_cast<std::size_t>(*channel);
  double sum = 0.0;
  for (std::size_t i = c; i < a.size(); i += 3) {
    const double e = a[i] - b[i];
    sum += e * e;
  }
  return sum / static_cast<double>(a.size() / 3);
}

double Psnr(const ImageRgb& x, const ImageRgb& xhat,
            std::optional<Channel> channel) {
  return DbFromMse(Mse(x, xhat, channel));
}

double Pspnr(const ImageRgb& x, const ImageRgb& xhat, const JndMap& jnd,
             const AdjustorSpec& spec) {
  const LossReport loss = JndLoss(x, xhat, jnd, spec);
  return DbFromMse(loss.total);
}

double Bpp(std::uint64_t compressed_bytes, int height, int width) {
  if (height <= 0 || width <= 0) {
    Fail(ErrorCode::kDomain, "bpp: image area must be positive");
  }
  return 8.0 * static_cast<double>(compressed_bytes) /
         (static_cast<double>(height) * width);
}

MetricsRecord EvaluatePair(const ImageRgb& x, const ImageRgb& xhat,
                           const JndMap& jnd, const AdjustorSpec& spec,
                           std::uint64_t compressed_bytes) {
  const LossReport loss = JndLoss(x, xhat, jnd, spec);
  MetricsRecord r;
  r.bpp = Bpp(compressed_bytes, x.height(), x.width());
  r.psnr = Psnr(x, xhat);
  r.psnr_r = Psnr(x, xhat, Channel::kR);
  r.psnr_g = Psnr(x, xhat, Channel::kG);
  r.psnr_b = Psnr(x, xhat, Channel::kB);
  r.pspnr = DbFromMse(loss.total);
  r.loss_total = loss.total;
  r.alpha = loss.adjustor.alpha;
  return r;
}

double SelectMetric(const MetricsRecord& record, CurveMetric metric) {
  switch (metric) {
    case CurveMetric::kPspnr:
      return record.pspnr;
    case CurveMetric::kPsnr:
      return record.psnr;
    case CurveMetric::kPsnrR:
      return record.psnr_r;
    case CurveMetric::kPsnrG:
      return record.psnr_g;
    case CurveMetric::kPsnrB:
      return record.psnr_b;
  }
  return record.pspnr;
}

std::vector<CurveSet> BuildCurves(const std::vector<LabeledRecord>& records,
                                  CurveMetric metric) {
  if (records.empty()) {
    Fail(ErrorCode::kEmptyGroup, "build_curves: no records");
  }
  // Ordered maps and sorted summation make the result independent of input
  // order down to the last bit.
  std::map<std::string, std::map<double, std::vector<double>>> groups;
  for (const auto& [label, record] : records) {
    groups[label][record.bpp].push_back(SelectMetric(record, metric));
  }
  std::vector<CurveSet> curves;
  curves.reserve(groups.size());
  for (const auto& [label, points] : groups) {
    CurveSet curve{label, {}};
    curve.points.reserve(points.size());
    for (const auto& [bpp, values] : points) {
      std::vector<double> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      double sum = 0.0;
      for (double v : sorted) sum += v;
      curve.points.push_back({bpp, sum / static_cast<double>(sorted.size())});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace jndopt
