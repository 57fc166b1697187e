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

#include "jndopt/loss.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "jndopt/error.hpp"

namespace jndopt {
namespace {

void CheckSameShape(const Shape& a, const Shape& b, const char* what) {
  if (a != b) {
    Fail(ErrorCode::kShapeMismatch,
         std::string(what) + ": shapes differ (" + std::to_string(a.height) +
             "x" + std::to_string(a.width) + " vs " +
             std::to_string(b.height) + "x" + std::to_string(b.width) + ")");
  }
}

double Sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

AdjustorSpec AdjustorSpec::Fixed(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    Fail(ErrorCode::kDomain, "fixed adjustor value must be positive");
  }
  return AdjustorSpec(value);
}

AdjustorSpec AdjustorSpec::Parse(std::string_view text) {
  if (text == "aware") return DistortionAware();
  constexpr std::string_view kPrefix = "fixed:";
  if (text.substr(0, kPrefix.size()) == kPrefix) {
    const std::string_view num = text.substr(kPrefix.size());
    double value = 0.0;
    const auto [end, ec] =
        std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec == std::errc() && end == num.data() + num.size() && !num.empty()) {
      return Fixed(value);
    }
  }
  Fail(ErrorCode::kDomain, "adjustor must be 'aware' or 'fixed:<value>', got '" +
                               std::string(text) + "'");
}

std::string AdjustorSpec::ToString() const {
  if (!is_fixed()) return "aware";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "fixed:%g", fixed_value_);
  return buf;
}

namespace detail {

double SumAbsDiff(std::span<const double> x, std::span<const double> xhat) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - xhat[i]);
  return sum;
}

double SumThresholds(std::span<const float> jnd) {
  double sum = 0.0;
  for (float t : jnd) sum += t;
  return sum;
}

AdjustorValue ResolveAdjustor(double sum_diff, double sum_jnd,
                              const AdjustorSpec& spec) {
  AdjustorValue value;
  value.ratio = sum_diff / sum_jnd;
  if (spec.is_fixed()) {
    value.alpha = spec.fixed_value();
  } else {
    value.alpha = value.ratio > 1.0 ? value.ratio : 1.0;
  }
  return value;
}

double JndLossKernel(std::span<const double> x, std::span<const double> xhat,
                     std::span<const float> jnd, double alpha,
                     std::span<double> per_pixel, std::span<double> gradient,
                     double gradient_scale) {
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = xhat[i] - x[i];
    const double excess = std::max(std::abs(e) - alpha * jnd[i], 0.0);
    const double loss = excess * excess;
    sum += loss;
    if (!per_pixel.empty()) per_pixel[i] = loss;
    if (!gradient.empty()) {
      gradient[i] = gradient_scale * 2.0 * excess * Sign(e);
    }
  }
  return sum / static_cast<double>(n);
}

}  // namespace detail

ChannelMap AbsoluteDiff(const ImageRgb& x, const ImageRgb& xhat) {
  CheckSameShape(x.shape(), xhat.shape(), "absolute_diff");
  ChannelMap out{x.shape(), std::vector<double>(x.size())};
  const auto a = x.values();
  const auto b = xhat.values();
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = std::abs(a[i] - b[i]);
  }
  return out;
}

AdjustorValue ComputeAdjustor(const ChannelMap& diff, const JndMap& jnd,
                              const AdjustorSpec& spec) {
  CheckSameShape(diff.shape, jnd.shape(), "compute_adjustor");
  if (diff.values.size() != diff.shape.size()) {
    Fail(ErrorCode::kShapeMismatch, "difference map size does not match shape");
  }
  double sum_diff = 0.0;
  for (double d : diff.values) sum_diff += d;
  return detail::ResolveAdjustor(sum_diff,
                                 detail::SumThresholds(jnd.thresholds()), spec);
}

LossReport JndLossWithAlpha(const ImageRgb& x, const ImageRgb& xhat,
                            const JndMap& jnd, const AdjustorValue& adjustor) {
  CheckSameShape(x.shape(), xhat.shape(), "jnd_loss");
  CheckSameShape(x.shape(), jnd.shape(), "jnd_loss");
  LossReport report;
  report.adjustor = adjustor;
  report.per_pixel = {x.shape(), std::vector<double>(x.size())};
  report.gradient = {x.shape(), std::vector<double>(x.size())};
  const double n = static_cast<double>(x.size());
  report.total = detail::JndLossKernel(
      x.values(), xhat.values(), jnd.thresholds(), adjustor.alpha,
      report.per_pixel.values, report.gradient.values, 1.0 / n);
  return report;
}

LossReport JndLoss(const ImageRgb& x, const ImageRgb& xhat, const JndMap& jnd,
                   const AdjustorSpec& spec) {
  CheckSameShape(x.shape(), xhat.shape(), "jnd_loss");
  CheckSameShape(x.shape(), jnd.shape(), "jnd_loss");
  const AdjustorValue adjustor = detail::ResolveAdjustor(
      detail::SumAbsDiff(x.values(), xhat.values()),
      detail::SumThresholds(jnd.thresholds()), spec);
  return JndLossWithAlpha(x, xhat, jnd, adjustor);
}

double MseObjective(const ImageRgb& x, const ImageRgb& xhat) {
  CheckSameShape(x.shape(), xhat.shape(), "mse");
  const auto a = x.values();
  const auto b = xhat.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a[i] - b[i];
    sum += e * e;
  }
  return sum / static_cast<double>(a.size());
}

ObjectiveValue CombinedObjective(double rate, double lambda,
                                 const LossReport& loss) {
  if (!(lambda > 0.0)) Fail(ErrorCode::kDomain, "lambda must be positive");
  if (!(rate >= 0.0)) Fail(ErrorCode::kDomain, "rate must be nonnegative");
  return {rate, lambda, loss.total, rate + lambda * loss.total};
}

}  // namespace jndopt
