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

#ifndef JNDOPT_IMAGE_HPP_
#define JNDOPT_IMAGE_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace jndopt {

inline constexpr double kMaxPixel = 255.0;

enum class Channel { kR = 0, kG = 1, kB = 2 };

struct Shape {
  int height = 0;
  int width = 0;
  int channels = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(height) * width * channels;
  }
  bool operator==(const Shape&) const = default;
};

// Three-channel (R,G,B) image in the real-valued working domain [0,255],
// stored row-major in (h, w, c) order. Immutable once built.
class ImageRgb {
 public:
  using Generator = std::function<double(int h, int w, int c)>;

  // Throws Error(kDomain) on empty dimensions, wrong value count, or values
  // outside [0,255].
  ImageRgb(int height, int width, std::vector<double> values);

  static ImageRgb Generate(int height, int width, const Generator& gen);
  static ImageRgb Filled(int height, int width, double r, double g, double b);

  int height() const { return height_; }
  int width() const { return width_; }
  static constexpr int channels() { return 3; }
  Shape shape() const { return {height_, width_, 3}; }
  std::size_t size() const { return values_.size(); }

  double at(int h, int w, int c) const {
    return values_[(static_cast<std::size_t>(h) * width_ + w) * 3 + c];
  }
  std::span<const double> values() const { return values_; }

 private:
  int height_;
  int width_;
  std::vector<double> values_;
};

// Single-channel plane in [0,255] (luminance, luma JND).
class ImagePlane {
 public:
  ImagePlane(int height, int width, std::vector<double> values);

  int height() const { return height_; }
  int width() const { return width_; }
  double at(int h, int w) const {
    return values_[static_cast<std::size_t>(h) * width_ + w];
  }
  std::span<const double> values() const { return values_; }

 private:
  int height_;
  int width_;
  std::vector<double> values_;
};

// Y = 0.299 R + 0.587 G + 0.114 B.
ImagePlane ToLuminance(const ImageRgb& img);

// Half-away-from-zero rounding followed by clamping to [0,255].
unsigned char QuantizeToByte(double v);

// Clamp every entry of `values` into [0,255] and wrap as an image.
ImageRgb ClampToImage(int height, int width, std::vector<double> values);

// 8-bit RGB or grayscale PNG (grayscale is replicated to three channels).
// No gamma or color management is applied.
ImageRgb LoadPng(const std::filesystem::path& path);
void SavePng(const ImageRgb& img, const std::filesystem::path& path);

}  // namespace jndopt

#endif  // JNDOPT_IMAGE_HPP_
