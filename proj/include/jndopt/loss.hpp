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

#ifndef JNDOPT_LOSS_HPP_
#define JNDOPT_LOSS_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jndopt/image.hpp"
#include "jndopt/jnd.hpp"

namespace jndopt {

// Real-valued (h, w, c) map with the same layout as ImageRgb.
struct ChannelMap {
  Shape shape;
  std::vector<double> values;
};

// Policy for the JND scale factor alpha.
class AdjustorSpec {
 public:
  // alpha = max(sum d / sum j, 1), recomputed from the current error.
  static AdjustorSpec DistortionAware() { return AdjustorSpec(0.0); }
  // alpha = value. Throws Error(kDomain) unless value > 0.
  static AdjustorSpec Fixed(double value);
  // "aware" or "fixed:<v>".
  static AdjustorSpec Parse(std::string_view text);

  bool is_fixed() const { return fixed_value_ > 0.0; }
  double fixed_value() const { return fixed_value_; }
  std::string ToString() const;

  bool operator==(const AdjustorSpec&) const = default;

 private:
  explicit AdjustorSpec(double fixed_value) : fixed_value_(fixed_value) {}
  double fixed_value_;
};

struct AdjustorValue {
  double alpha = 1.0;
  // Raw sum ratio sum d / sum j, reported in both modes.
  double ratio = 0.0;
};

struct LossReport {
  ChannelMap per_pixel;  // ReLU(d - alpha j)^2
  double total = 0.0;    // mean of per_pixel over h*w*c
  ChannelMap gradient;   // dD/dxhat with alpha held constant
  AdjustorValue adjustor;
};

struct ObjectiveValue {
  double rate = 0.0;
  double lambda = 0.0;
  double distortion = 0.0;
  double total = 0.0;
};

// d(h,w,c) = |x - xhat|.
ChannelMap AbsoluteDiff(const ImageRgb& x, const ImageRgb& xhat);

AdjustorValue ComputeAdjustor(const ChannelMap& diff, const JndMap& jnd,
                              const AdjustorSpec& spec);

LossReport JndLoss(const ImageRgb& x, const ImageRgb& xhat, const JndMap& jnd,
                   const AdjustorSpec& spec);

// Same loss with an explicitly supplied alpha. Used by the optimizer and by
// the finite-difference checks, where alpha must stay frozen.
LossReport JndLossWithAlpha(const ImageRgb& x, const ImageRgb& xhat,
                            const JndMap& jnd, const AdjustorValue& adjustor);

double MseObjective(const ImageRgb& x, const ImageRgb& xhat);

// total = rate + lambda * loss.total. Throws Error(kDomain) unless lambda > 0
// and rate >= 0.
ObjectiveValue CombinedObjective(double rate, double lambda,
                                 const LossReport& loss);

namespace detail {

// Raw-buffer kernels shared by the public API and the optimizer. All spans
// must have the same length.
double SumAbsDiff(std::span<const double> x, std::span<const double> xhat);
double SumThresholds(std::span<const float> jnd);
AdjustorValue ResolveAdjustor(double sum_diff, double sum_jnd,
                              const AdjustorSpec& spec);
// Returns the mean loss. `per_pixel` and `gradient` may be empty to skip
// them; otherwise they must match the input length. `gradient_scale`
// multiplies the per-entry derivative 2 ReLU(d - alpha j) sign(xhat - x).
double JndLossKernel(std::span<const double> x, std::span<const double> xhat,
                     std::span<const float> jnd, double alpha,
                     std::span<double> per_pixel, std::span<double> gradient,
                     double gradient_scale);

}  // namespace detail

}  // namespace jndopt

#endif  // JNDOPT_LOSS_HPP_
