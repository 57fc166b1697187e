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

#include "jndopt/assign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "jndopt/error.hpp"
#include "random.hpp"

namespace jndopt {
namespace {

constexpr double kStallImprovement = 1e-9;
constexpr int kStallIterations = 20;
constexpr double kBudgetTolerance = 0.005;
constexpr int kInfeasibleIterations = 50;

double MeanSquaredError(std::span<const double> x,
                        std::span<const double> xhat) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = xhat[i] - x[i];
    sum += e * e;
  }
  return sum / static_cast<double>(x.size());
}

// Uniformly rescales xhat - x to mean(e^2) = target, then clamps to [0,255].
void ProjectAndClamp(std::span<const double> x, std::span<double> xhat,
                     double target) {
  const double mse = MeanSquaredError(x, xhat);
  const double scale = mse > 0.0 ? std::sqrt(target / mse) : 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xhat[i] = std::clamp(x[i] + scale * (xhat[i] - x[i]), 0.0, kMaxPixel);
  }
}

}  // namespace

void AssignConfig::Validate() const {
  if (!(target_mse > 0.0) || !std::isfinite(target_mse)) {
    Fail(ErrorCode::kDomain, "target_mse must be positive");
  }
  if (max_iters < 1) Fail(ErrorCode::kDomain, "max_iters must be at least 1");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    Fail(ErrorCode::kDomain, "step_size must be positive");
  }
}

RegionStats ComputeRegionStats(const ImageRgb& x, const ImageRgb& xhat,
                               const JndMap& jnd) {
  if (x.shape() != xhat.shape() || x.shape() != jnd.shape()) {
    Fail(ErrorCode::kShapeMismatch, "region stats: shapes differ");
  }
  const auto a = x.values();
  const auto b = xhat.values();
  const auto t = jnd.thresholds();
  const std::size_t n = a.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return t[i] < t[j]; });

  RegionStats stats;
  for (int q = 0; q < 4; ++q) {
    const std::size_t begin = n * q / 4;
    const std::size_t end = n * (q + 1) / 4;
    double sum = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      sum += std::abs(a[order[k]] - b[order[k]]);
    }
    stats.quartile_mean_abs[q] =
        end > begin ? sum / static_cast<double>(end - begin) : 0.0;
  }
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    for (std::size_t i = c; i < n; i += 3) sum += std::abs(a[i] - b[i]);
    stats.channel_mean_abs[c] = sum / static_cast<double>(n / 3);
  }
  const double top = stats.quartile_mean_abs[3];
  const double bottom = stats.quartile_mean_abs[0];
  if (bottom > 0.0) {
    stats.concentration_ratio = top / bottom;
  } else {
    stats.concentration_ratio =
        top > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return stats;
}

AssignReport AssignDistortion(const ImageRgb& x, const JndMap& jnd,
                              const AssignConfig& config) {
  config.Validate();
  if (x.shape() != jnd.shape()) {
    Fail(ErrorCode::kShapeMismatch, "assign: JND map shape differs from image");
  }
  const auto xs = x.values();
  const auto thresholds = jnd.thresholds();
  const std::size_t n = xs.size();
  const double sum_jnd = detail::SumThresholds(thresholds);

  internal::Rng rng(config.seed);
  std::vector<double> xhat(n);
  for (std::size_t i = 0; i < n; ++i) xhat[i] = xs[i] + rng.Normal();
  ProjectAndClamp(xs, xhat, config.target_mse);

  std::vector<double> gradient(n);
  auto evaluate = [&](int iteration) {
    const AdjustorValue adj = detail::ResolveAdjustor(
        detail::SumAbsDiff(xs, xhat), sum_jnd, config.adjustor);
    const double loss =
        detail::JndLossKernel(xs, xhat, thresholds, adj.alpha, {}, {}, 0.0);
    return TrajectoryPoint{iteration, loss, adj.alpha,
                           MeanSquaredError(xs, xhat)};
  };

  std::vector<TrajectoryPoint> trajectory;
  trajectory.push_back(evaluate(0));
  int stalled = 0;
  int off_budget = 0;
  for (int it = 1; it <= config.max_iters; ++it) {
    const double alpha = trajectory.back().alpha;
    // Per-entry derivative of ReLU(d - alpha j)^2; the mean reduction's 1/N
    // is left out so step_size is in pixel units.
    detail::JndLossKernel(xs, xhat, thresholds, alpha, {}, gradient, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      xhat[i] -= config.step_size * gradient[i];
    }
    ProjectAndClamp(xs, xhat, config.target_mse);

    const TrajectoryPoint point = evaluate(it);
    const double improvement = trajectory.back().loss_total - point.loss_total;
    trajectory.push_back(point);

    if (std::abs(point.mse - config.target_mse) >
        kBudgetTolerance * config.target_mse) {
      if (++off_budget >= kInfeasibleIterations) {
        Fail(ErrorCode::kDomain,
             "target_mse " + std::to_string(config.target_mse) +
                 " is unreachable after clamping to [0,255] (mse stuck at " +
                 std::to_string(point.mse) + ")");
      }
    } else {
      off_budget = 0;
    }
    // Only a feasible iterate may count as converged.
    stalled = improvement < kStallImprovement && off_budget == 0 ? stalled + 1
                                                                 : 0;
    if (stalled >= kStallIterations) break;
  }

  ImageRgb result(x.height(), x.width(), std::move(xhat));
  RegionStats stats = ComputeRegionStats(x, result, jnd);
  return {std::move(result), std::move(trajectory), stats};
}

ImageRgb InjectJndNoise(const ImageRgb& x, const JndMap& jnd, double k,
                        std::uint64_t seed) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    Fail(ErrorCode::kDomain, "k must be positive");
  }
  if (x.shape() != jnd.shape()) {
    Fail(ErrorCode::kShapeMismatch, "inject: JND map shape differs from image");
  }
  const auto xs = x.values();
  const auto thresholds = jnd.thresholds();
  internal::Rng rng(seed);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i] = std::clamp(xs[i] + k * thresholds[i] * rng.Sign(), 0.0, kMaxPixel);
  }
  return ImageRgb(x.height(), x.width(), std::move(out));
}

ImageRgb UniformNoise(const ImageRgb& x, double target_mse,
                      std::uint64_t seed) {
  if (!(target_mse > 0.0)) {
    Fail(ErrorCode::kDomain, "target_mse must be positive");
  }
  const auto xs = x.values();
  internal::Rng rng(seed);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i] + rng.Normal();
  ProjectAndClamp(xs, out, target_mse);
  return ImageRgb(x.height(), x.width(), std::move(out));
}

}  // namespace jndopt
