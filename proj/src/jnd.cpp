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

#include "jndopt/jnd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "jndopt/error.hpp"

namespace jndopt {
namespace {

using Kernel = std::array<std::array<int, 5>, 5>;

// Background luminance low-pass; weights sum to 32.
constexpr Kernel kBackground = {{
    {1, 1, 1, 1, 1},
    {1, 2, 2, 2, 1},
    {1, 2, 0, 2, 1},
    {1, 2, 2, 2, 1},
    {1, 1, 1, 1, 1},
}};

// Directional gradient operators (horizontal edge, two diagonals, vertical
// edge). Each has absolute positive weight 16.
constexpr std::array<Kernel, 4> kGradients = {{
    {{
        {0, 0, 0, 0, 0},
        {1, 3, 8, 3, 1},
        {0, 0, 0, 0, 0},
        {-1, -3, -8, -3, -1},
        {0, 0, 0, 0, 0},
    }},
    {{
        {0, 0, 1, 0, 0},
        {0, 8, 3, 0, 0},
        {1, 3, 0, -3, -1},
        {0, 0, -3, -8, 0},
        {0, 0, -1, 0, 0},
    }},
    {{
        {0, 0, 1, 0, 0},
        {0, 0, 3, 8, 0},
        {-1, -3, 0, 3, 1},
        {0, -8, -3, 0, 0},
        {0, 0, -1, 0, 0},
    }},
    {{
        {0, 1, 0, -1, 0},
        {0, 3, 0, -3, 0},
        {0, 8, 0, -8, 0},
        {0, 3, 0, -3, 0},
        {0, 1, 0, -1, 0},
    }},
}};

double LuminanceAdaptation(double bg) {
  if (bg <= 127.0) return 17.0 * (1.0 - std::sqrt(bg / 127.0)) + 3.0;
  return 3.0 / 128.0 * (bg - 127.0) + 3.0;
}

double TextureMasking(double mg, double bg) {
  return mg * (0.0001 * bg + 0.115) + (0.5 - 0.01 * bg);
}

// Threshold at (h, w) using edge-clamped sampling. For pixels at least two
// away from every border the clamp never triggers.
double ThresholdAt(const ImagePlane& luma, int h, int w) {
  const int height = luma.height();
  const int width = luma.width();
  double background = 0.0;
  std::array<double, 4> grad{};
  for (int dy = 0; dy < 5; ++dy) {
    const int y = std::clamp(h + dy - 2, 0, height - 1);
    for (int dx = 0; dx < 5; ++dx) {
      const int x = std::clamp(w + dx - 2, 0, width - 1);
      const double v = luma.at(y, x);
      background += kBackground[dy][dx] * v;
      for (int k = 0; k < 4; ++k) grad[k] += kGradients[k][dy][dx] * v;
    }
  }
  const double bg = background / 32.0;
  double mg = 0.0;
  for (double g : grad) mg = std::max(mg, std::abs(g));
  mg /= 16.0;
  return std::max(LuminanceAdaptation(bg), TextureMasking(mg, bg));
}

// Nearest coordinate with a full 5-tap neighborhood, or `i` itself when the
// dimension is too small to have one.
int InteriorCoord(int i, int extent) {
  return extent >= 5 ? std::clamp(i, 2, extent - 3) : i;
}

void CheckFloor(double floor) {
  if (!(floor > 0.0)) {
    Fail(ErrorCode::kDomain, "threshold floor must be positive");
  }
}

}  // namespace

ChannelWeights::ChannelWeights(double r, double g, double b)
    : r_(r), g_(g), b_(b) {
  if (!(r > 0.0 && g > 0.0 && b > 0.0)) {
    Fail(ErrorCode::kDomain, "channel weights must be positive");
  }
  if (g > r || g > b) {
    Fail(ErrorCode::kDomain,
         "green weight may not exceed the red or blue weight");
  }
}

JndMap::JndMap(int height, int width, std::vector<float> thresholds,
               double floor)
    : height_(height),
      width_(width),
      floor_(floor),
      thresholds_(std::move(thresholds)) {
  CheckFloor(floor);
  if (height < 1 || width < 1) {
    Fail(ErrorCode::kDomain, "JND map dimensions must be positive");
  }
  if (thresholds_.size() != static_cast<std::size_t>(height) * width * 3) {
    Fail(ErrorCode::kShapeMismatch, "JND map value count does not match " +
                                        std::to_string(height) + "x" +
                                        std::to_string(width) + "x3");
  }
  const float lo = static_cast<float>(floor);
  for (float& t : thresholds_) {
    if (!std::isfinite(t)) {
      Fail(ErrorCode::kFormat, "JND map contains a non-finite threshold");
    }
    t = std::max(t, lo);
  }
}

ImagePlane ClassicalJnd(const ImagePlane& luma, double floor) {
  CheckFloor(floor);
  const int height = luma.height();
  const int width = luma.width();
  std::vector<double> out(static_cast<std::size_t>(height) * width);
  for (int h = 0; h < height; ++h) {
    const int ch = InteriorCoord(h, height);
    for (int w = 0; w < width; ++w) {
      const int cw = InteriorCoord(w, width);
      double t;
      if (ch == h && cw == w) {
        t = ThresholdAt(luma, h, w);
      } else if (ch < h || (ch == h && cw < w)) {
        // Interior pixel earlier in row-major order; already filled.
        t = out[static_cast<std::size_t>(ch) * width + cw];
      } else {
        t = ThresholdAt(luma, ch, cw);
      }
      out[static_cast<std::size_t>(h) * width + w] = std::max(t, floor);
    }
  }
  return ImagePlane(height, width, std::move(out));
}

JndMap ExpandToChannels(const ImagePlane& luma_jnd,
                        const ChannelWeights& weights, double floor) {
  CheckFloor(floor);
  const auto src = luma_jnd.values();
  std::vector<float> out(src.size() * 3);
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      out[3 * i + c] = static_cast<float>(std::max(weights[c] * src[i], floor));
    }
  }
  return JndMap(luma_jnd.height(), luma_jnd.width(), std::move(out), floor);
}

JndMap ComputeJndMap(const ImageRgb& img, const ChannelWeights& weights,
                     double floor) {
  return ExpandToChannels(ClassicalJnd(ToLuminance(img), floor), weights,
                          floor);
}

}  // namespace jndopt
