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

#include "jndopt/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jndopt/error.hpp"

namespace jndopt {
namespace {

void CheckDims(int height, int width) {
  if (height < 1 || width < 1) {
    Fail(ErrorCode::kDomain, "image dimensions must be positive, got " +
                                 std::to_string(height) + "x" +
                                 std::to_string(width));
  }
}

void CheckValues(std::span<const double> values, std::size_t expected) {
  if (values.size() != expected) {
    Fail(ErrorCode::kDomain, "expected " + std::to_string(expected) +
                                 " values, got " +
                                 std::to_string(values.size()));
  }
  for (double v : values) {
    // Also rejects NaN.
    if (!(v >= 0.0 && v <= kMaxPixel)) {
      Fail(ErrorCode::kDomain,
           "pixel value out of [0,255]: " + std::to_string(v));
    }
  }
}

}  // namespace

ImageRgb::ImageRgb(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  CheckDims(height, width);
  CheckValues(values_, static_cast<std::size_t>(height) * width * 3);
}

ImageRgb ImageRgb::Generate(int height, int width, const Generator& gen) {
  CheckDims(height, width);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(height) * width * 3);
  for (int h = 0; h < height; ++h) {
    for (int w = 0; w < width; ++w) {
      for (int c = 0; c < 3; ++c) values.push_back(gen(h, w, c));
    }
  }
  return ImageRgb(height, width, std::move(values));
}

ImageRgb ImageRgb::Filled(int height, int width, double r, double g,
                          double b) {
  return Generate(height, width, [&](int, int, int c) {
    return c == 0 ? r : (c == 1 ? g : b);
  });
}

ImagePlane::ImagePlane(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  CheckDims(height, width);
  CheckValues(values_, static_cast<std::size_t>(height) * width);
}

ImagePlane ToLuminance(const ImageRgb& img) {
  const auto src = img.values();
  std::vector<double> luma(src.size() / 3);
  for (std::size_t i = 0; i < luma.size(); ++i) {
    const double y =
        0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
    // The weights sum to one, but rounding can push a 255 pixel a hair over.
    luma[i] = std::clamp(y, 0.0, kMaxPixel);
  }
  return ImagePlane(img.height(), img.width(), std::move(luma));
}

unsigned char QuantizeToByte(double v) {
  // std::round rounds halfway cases away from zero.
  const double r = std::round(v);
  return static_cast<unsigned char>(std::clamp(r, 0.0, kMaxPixel));
}

ImageRgb ClampToImage(int height, int width, std::vector<double> values) {
  for (double& v : values) v = std::clamp(v, 0.0, kMaxPixel);
  return ImageRgb(height, width, std::move(values));
}

}  // namespace jndopt
