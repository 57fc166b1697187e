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

#ifndef JNDOPT_ASSIGN_HPP_
#define JNDOPT_ASSIGN_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "jndopt/image.hpp"
#include "jndopt/jnd.hpp"
#include "jndopt/loss.hpp"

namespace jndopt {

struct AssignConfig {
  double target_mse = 25.0;  // squared 8-bit units
  int max_iters = 500;
  // Step on the per-entry loss ReLU(d - alpha j)^2. At 0.5 a single step moves
  // an entry exactly onto its alpha * j boundary.
  double step_size = 0.5;
  std::uint64_t seed = 0;
  AdjustorSpec adjustor = AdjustorSpec::DistortionAware();

  // Throws Error(kDomain) when a field is out of range.
  void Validate() const;
};

struct TrajectoryPoint {
  int iteration = 0;
  double loss_total = 0.0;
  double alpha = 0.0;
  double mse = 0.0;
};

// Mean |xhat - x| partitioned two ways: by JND quartile (entries sorted by
// threshold, ties by index, quartile 0 lowest) and by channel.
struct RegionStats {
  std::array<double, 4> quartile_mean_abs{};
  std::array<double, 3> channel_mean_abs{};
  // quartile_mean_abs[3] / quartile_mean_abs[0]
  double concentration_ratio = 0.0;
};

struct AssignReport {
  ImageRgb xhat;
  std::vector<TrajectoryPoint> trajectory;
  RegionStats region_stats;
};

RegionStats ComputeRegionStats(const ImageRgb& x, const ImageRgb& xhat,
                               const JndMap& jnd);

// Fixed-budget distortion assignment: gradient steps on the JND loss with the
// error field projected back onto mean(e^2) = target_mse every iteration.
// Throws Error(kDomain) if clamping to [0,255] keeps the budget out of reach
// (more than 0.5% off for 50 consecutive iterations).
AssignReport AssignDistortion(const ImageRgb& x, const JndMap& jnd,
                              const AssignConfig& config);

// xhat = clamp(x + k * j * s, 0, 255) with s a seeded +-1 field.
ImageRgb InjectJndNoise(const ImageRgb& x, const JndMap& jnd, double k,
                        std::uint64_t seed);

// Control for the assignment experiment: seeded Gaussian noise scaled to
// mean(e^2) = target_mse, placed without regard to the JND map.
ImageRgb UniformNoise(const ImageRgb& x, double target_mse,
                      std::uint64_t seed);

}  // namespace jndopt

#endif  // JNDOPT_ASSIGN_HPP_
