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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "jndopt/error.hpp"
#include "jndopt/jnd.hpp"

namespace jndopt {
namespace {

constexpr char kMagic[4] = {'J', 'N', 'D', 'M'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderSize = 16;

void PutU16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
  }
}

std::uint32_t GetU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t GetU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void WriteMapFile(const std::filesystem::path& path,
                  const MapFileHeader& header, std::span<const float> values) {
  if (header.height < 1 || header.width < 1 || header.channels < 1 ||
      header.channels > 0xffff) {
    Fail(ErrorCode::kDomain, "invalid map dimensions");
  }
  const std::size_t count = static_cast<std::size_t>(header.height) *
                            header.width * header.channels;
  if (values.size() != count) {
    Fail(ErrorCode::kShapeMismatch, "map value count does not match header");
  }
  std::vector<unsigned char> bytes;
  bytes.reserve(kHeaderSize + 4 * count);
  bytes.insert(bytes.end(), std::begin(kMagic), std::end(kMagic));
  PutU16(bytes, kVersion);
  PutU32(bytes, static_cast<std::uint32_t>(header.height));
  PutU32(bytes, static_cast<std::uint32_t>(header.width));
  PutU16(bytes, static_cast<std::uint16_t>(header.channels));
  for (float v : values) PutU32(bytes, std::bit_cast<std::uint32_t>(v));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

std::vector<float> ReadMapFile(const std::filesystem::path& path,
                               MapFileHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderSize ||
      !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin(),
                  [](char a, unsigned char b) {
                    return static_cast<unsigned char>(a) == b;
                  })) {
    Fail(ErrorCode::kFormat, path.string() + " is not a JND map file");
  }
  const std::uint16_t version = GetU16(&bytes[4]);
  if (version != kVersion) {
    Fail(ErrorCode::kFormat, path.string() + ": unsupported map version " +
                                 std::to_string(version));
  }
  const std::uint32_t height = GetU32(&bytes[6]);
  const std::uint32_t width = GetU32(&bytes[10]);
  const std::uint16_t channels = GetU16(&bytes[14]);
  if (height == 0 || width == 0 || channels == 0 || height > 0x7fffffff ||
      width > 0x7fffffff) {
    Fail(ErrorCode::kFormat, path.string() + ": invalid map dimensions");
  }
  const std::uint64_t count =
      static_cast<std::uint64_t>(height) * width * channels;
  if (bytes.size() - kHeaderSize != count * 4) {
    Fail(ErrorCode::kFormat, path.string() + ": payload size " +
                                 std::to_string(bytes.size() - kHeaderSize) +
                                 " does not match header");
  }
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<float>(GetU32(&bytes[kHeaderSize + 4 * i]));
  }
  header->height = static_cast<int>(height);
  header->width = static_cast<int>(width);
  header->channels = channels;
  return values;
}

void SaveJndMap(const JndMap& map, const std::filesystem::path& path) {
  WriteMapFile(path, {map.height(), map.width(), 3}, map.thresholds());
}

JndMap LoadJndMap(const std::filesystem::path& path, const Shape& expected,
                  double floor) {
  MapFileHeader header;
  std::vector<float> values = ReadMapFile(path, &header);
  if (header.channels != 3) {
    Fail(ErrorCode::kFormat,
         path.string() + ": JND maps must have 3 channels, file has " +
             std::to_string(header.channels));
  }
  const Shape stored{header.height, header.width, header.channels};
  if (stored != expected) {
    Fail(ErrorCode::kShapeMismatch,
         path.string() + ": map is " + std::to_string(stored.height) + "x" +
             std::to_string(stored.width) + ", expected " +
             std::to_string(expected.height) + "x" +
             std::to_string(expected.width));
  }
  return JndMap(header.height, header.width, std::move(values), floor);
}

}  // namespace jndopt
