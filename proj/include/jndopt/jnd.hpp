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

#ifndef JNDOPT_JND_HPP_
#define JNDOPT_JND_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include "jndopt/image.hpp"

namespace jndopt {

inline constexpr double kDefaultThresholdFloor = 0.1;

// Per-channel scale factors applied to a luminance JND plane. Green is the
// most sensitive channel, so w_g may not exceed w_r or w_b.
class ChannelWeights {
 public:
  // Defaults: R 1.4, G 1.0, B 2.2.
  ChannelWeights() = default;
  // Throws Error(kDomain) if any weight is nonpositive or the ordering is
  // violated.
  ChannelWeights(double r, double g, double b);

  double r() const { return r_; }
  double g() const { return g_; }
  double b() const { return b_; }
  double operator[](int c) const { return c == 0 ? r_ : (c == 1 ? g_ : b_); }

 private:
  double r_ = 1.4;
  double g_ = 1.0;
  double b_ = 2.2;
};

// Per-pixel, per-channel visibility thresholds in 8-bit intensity units,
// (h, w, c) row-major. Thresholds are stored in single precision, which is
// also the precision of the on-disk format.
class JndMap {
 public:
  // Every threshold is raised to `floor` (> 0).
  JndMap(int height, int width, std::vector<float> thresholds,
         double floor = kDefaultThresholdFloor);

  int height() const { return height_; }
  int width() const { return width_; }
  static constexpr int channels() { return 3; }
  Shape shape() const { return {height_, width_, 3}; }
  std::size_t size() const { return thresholds_.size(); }
  double floor() const { return floor_; }

  double at(int h, int w, int c) const {
    return thresholds_[(static_cast<std::size_t>(h) * width_ + w) * 3 + c];
  }
  std::span<const float> thresholds() const { return thresholds_; }

 private:
  int height_;
  int width_;
  double floor_;
  std::vector<float> thresholds_;
};

// Classical spatial JND (luminance adaptation vs. texture masking) on a
// luminance plane:
//   bg  = 5x5 weighted background mean (kernel weights sum to 32)
//   mg  = max_k |G_k * luma| / 16 over four directional operators
//   LA  = 17 (1 - sqrt(bg / 127)) + 3        for bg <= 127
//       = 3/128 (bg - 127) + 3               otherwise
//   TM  = mg (0.0001 bg + 0.115) + 0.5 - 0.01 bg
//   jnd = max(LA, TM, floor)
// Pixels within two of the border copy the nearest interior value. Planes
// narrower than five pixels in a dimension have no interior along it and are
// evaluated with edge-clamped sampling instead.
ImagePlane ClassicalJnd(const ImagePlane& luma,
                        double floor = kDefaultThresholdFloor);

// thresholds(h,w,c) = max(weight_c * luma_jnd(h,w), floor).
JndMap ExpandToChannels(const ImagePlane& luma_jnd,
                        const ChannelWeights& weights = {},
                        double floor = kDefaultThresholdFloor);

// Convenience: ExpandToChannels(ClassicalJnd(ToLuminance(img))).
JndMap ComputeJndMap(const ImageRgb& img, const ChannelWeights& weights = {},
                     double floor = kDefaultThresholdFloor);

// Binary map container: "JNDM", u16 version = 1, u32 height, u32 width,
// u16 channels, then height*width*channels little-endian float32 values.
struct MapFileHeader {
  int height = 0;
  int width = 0;
  int channels = 0;
};

void WriteMapFile(const std::filesystem::path& path, const MapFileHeader& header,
                  std::span<const float> values);
std::vector<float> ReadMapFile(const std::filesystem::path& path,
                               MapFileHeader* header);

void SaveJndMap(const JndMap& map, const std::filesystem::path& path);
// Throws Error(kFormat) on a malformed file and Error(kShapeMismatch) when the
// stored dimensions differ from `expected`.
JndMap LoadJndMap(const std::filesystem::path& path, const Shape& expected,
                  double floor = kDefaultThresholdFloor);

}  // namespace jndopt

#endif  // JNDOPT_JND_HPP_
