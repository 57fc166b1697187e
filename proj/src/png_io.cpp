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

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "jndopt/error.hpp"
#include "jndopt/image.hpp"

namespace jndopt {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngState {
  std::string error;
};

void OnPngError(png_structp png, png_const_charp message) {
  auto* state = static_cast<PngState*>(png_get_error_ptr(png));
  if (state) state->error = message;
  png_longjmp(png, 1);
}

void OnPngWarning(png_structp, png_const_charp) {}

struct Decoded {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  bool has_trns = false;
  std::vector<unsigned char> rgb;
  std::vector<png_bytep> rows;
};

// Returns false on a libpng error (message in state->error) and sets
// *rejected when the format is outside what we accept. No object with a
// nontrivial destructor lives in this frame across setjmp.
bool DecodePng(png_structp png, png_infop info, std::FILE* fp, Decoded* out,
               std::string* rejected) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, fp);
  png_read_info(png, info);
  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  out->bit_depth = png_get_bit_depth(png, info);
  out->color_type = png_get_color_type(png, info);
  out->has_trns = png_get_valid(png, info, PNG_INFO_tRNS) != 0;

  if (out->bit_depth > 8) {
    *rejected = "16-bit PNG is not supported";
    return true;
  }
  if ((out->color_type & PNG_COLOR_MASK_ALPHA) != 0 || out->has_trns) {
    *rejected = out->color_type == PNG_COLOR_TYPE_PALETTE
                    ? "palette PNG with transparency is not supported"
                    : "PNG with alpha is not supported";
    return true;
  }

  if (out->color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (out->color_type == PNG_COLOR_TYPE_GRAY) {
    if (out->bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  if (rowbytes != static_cast<std::size_t>(out->width) * 3) {
    *rejected = "unexpected row layout after expansion";
    return true;
  }
  out->rgb.resize(rowbytes * out->height);
  out->rows.resize(out->height);
  for (png_uint_32 y = 0; y < out->height; ++y) {
    out->rows[y] = out->rgb.data() + y * rowbytes;
  }
  png_read_image(png, out->rows.data());
  png_read_end(png, nullptr);
  return true;
}

bool EncodePng(png_structp png, png_infop info, std::FILE* fp,
               const std::vector<unsigned char>* rgb, int height, int width) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * 3;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, rgb->data() + y * stride);
  }
  png_write_end(png, nullptr);
  return true;
}

}  // namespace

ImageRgb LoadPng(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) Fail(ErrorCode::kIo, "cannot open " + path.string());

  unsigned char sig[8] = {};
  if (std::fread(sig, 1, sizeof(sig), fp.get()) != sizeof(sig) ||
      png_sig_cmp(sig, 0, sizeof(sig)) != 0) {
    Fail(ErrorCode::kFormat, path.string() + " is not a PNG file");
  }

  PngState state;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state,
                                           OnPngError, OnPngWarning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    Fail(ErrorCode::kIo, "libpng initialization failed");
  }
  png_set_sig_bytes(png, sizeof(sig));

  Decoded decoded;
  std::string rejected;
  const bool ok = DecodePng(png, info, fp.get(), &decoded, &rejected);
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok) Fail(ErrorCode::kFormat, path.string() + ": " + state.error);
  if (!rejected.empty()) Fail(ErrorCode::kFormat, path.string() + ": " + rejected);

  std::vector<double> values(decoded.rgb.begin(), decoded.rgb.end());
  return ImageRgb(static_cast<int>(decoded.height),
                  static_cast<int>(decoded.width), std::move(values));
}

void SavePng(const ImageRgb& img, const std::filesystem::path& path) {
  std::vector<unsigned char> rgb(img.size());
  const auto values = img.values();
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = QuantizeToByte(values[i]);

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");

  PngState state;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state,
                                            OnPngError, OnPngWarning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    Fail(ErrorCode::kIo, "libpng initialization failed");
  }
  const bool ok =
      EncodePng(png, info, fp.get(), &rgb, img.height(), img.width());
  png_destroy_write_struct(&png, &info);
  if (!ok) Fail(ErrorCode::kIo, path.string() + ": " + state.error);
  if (std::fflush(fp.get()) != 0 || std::ferror(fp.get())) {
    Fail(ErrorCode::kIo, "write failed for " + path.string());
  }
}

}  // namespace jndopt
