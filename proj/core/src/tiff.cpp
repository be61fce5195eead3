// Copyright 2026 The tissuelens Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tissuelens/tiff.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <vector>

#include "tissuelens/error.hpp"
#include "tissuelens/plane_io.hpp"

namespace tissuelens {

namespace fs = std::filesystem;

namespace {

constexpr std::uint16_t kImageWidth = 256;
constexpr std::uint16_t kImageLength = 257;
constexpr std::uint16_t kBitsPerSample = 258;
constexpr std::uint16_t kCompression = 259;
constexpr std::uint16_t kPhotometric = 262;
constexpr std::uint16_t kStripOffsets = 273;
constexpr std::uint16_t kSamplesPerPixel = 277;
constexpr std::uint16_t kRowsPerStrip = 278;
constexpr std::uint16_t kStripByteCounts = 279;
constexpr std::uint16_t kPlanarConfig = 284;
constexpr std::uint16_t kTileWidth = 322;
constexpr std::uint16_t kSampleFormat = 339;

class Reader {
 public:
  Reader(std::vector<std::uint8_t> bytes, std::string name)
      : b_(std::move(bytes)), name_(std::move(name)) {
    if (b_.size() < 8) bad("file too short");
    if (b_[0] == 'I' && b_[1] == 'I') little_ = true;
    else if (b_[0] == 'M' && b_[1] == 'M') little_ = false;
    else bad("not a TIFF file");
    if (u16(2) != 42) bad("unsupported TIFF variant (BigTIFF?)");
  }

  [[noreturn]] void bad(const std::string& what) const {
    fail(ErrorKind::kInvalidArgument, name_ + ": " + what, name_);
  }

  std::uint16_t u16(std::size_t off) const {
    if (off + 2 > b_.size()) bad("truncated");
    return little_ ? static_cast<std::uint16_t>(b_[off] | (b_[off + 1] << 8))
                   : static_cast<std::uint16_t>((b_[off] << 8) | b_[off + 1]);
  }
  std::uint32_t u32(std::size_t off) const {
    if (off + 4 > b_.size()) bad("truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint32_t byte = b_[off + (little_ ? 3 - i : i)];
      v = (v << 8) | byte;
    }
    return v;
  }

  /// Values of one IFD entry as integers (SHORT or LONG).
  std::vector<std::uint32_t> values(std::size_t entry) const {
    const std::uint16_t type = u16(entry + 2);
    const std::uint32_t count = u32(entry + 4);
    std::size_t size = 0;
    if (type == 3) size = 2;
    else if (type == 4) size = 4;
    else if (type == 1) size = 1;
    else bad("unsupported tag type " + std::to_string(type));
    const std::size_t total = size * count;
    const std::size_t base = total <= 4 ? entry + 8 : u32(entry + 8);
    if (base + total > b_.size()) bad("tag data out of range");
    std::vector<std::uint32_t> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::size_t off = base + i * size;
      out.push_back(size == 1 ? b_[off] : size == 2 ? u16(off) : u32(off));
    }
    return out;
  }

  template <typename T>
  Plane<T> decode(int max_bits) const {
    const std::uint32_t ifd = u32(4);
    const std::uint16_t n = u16(ifd);
    std::map<std::uint16_t, std::vector<std::uint32_t>> tags;
    for (std::uint16_t i = 0; i < n; ++i) {
      const std::size_t entry = ifd + 2 + 12u * i;
      tags[u16(entry)] = values(entry);
    }
    auto tag = [&](std::uint16_t id, std::uint32_t dflt) {
      auto it = tags.find(id);
      return it == tags.end() || it->second.empty() ? dflt : it->second.front();
    };
    if (tags.count(kTileWidth)) bad("tiled TIFF layout is not supported");
    if (!tags.count(kImageWidth) || !tags.count(kImageLength)) bad("missing image dimensions");
    if (tag(kCompression, 1) != 1) bad("compressed TIFF is not supported");
    if (tag(kSamplesPerPixel, 1) != 1) bad("expected a single sample per pixel");
    if (tag(kPlanarConfig, 1) != 1) bad("unsupported planar configuration");
    if (tag(kSampleFormat, 1) != 1) bad("expected unsigned integer samples");
    const std::uint32_t bits = tag(kBitsPerSample, 1);
    if (bits != 8 && bits != 16 && bits != 32) bad("unsupported bit depth " + std::to_string(bits));
    if (static_cast<int>(bits) > max_bits) {
      bad(std::to_string(bits) + "-bit samples do not fit the target type");
    }
    const std::uint32_t w = tag(kImageWidth, 0), h = tag(kImageLength, 0);
    if (w == 0 || h == 0 || w > (1u << 30) / h) bad("invalid dimensions");
    const auto offsets = tags[kStripOffsets];
    const auto counts = tags[kStripByteCounts];
    if (offsets.empty() || offsets.size() != counts.size()) bad("invalid strip tables");
    const std::size_t bpp = bits / 8;

    Plane<T> out(static_cast<int>(w), static_cast<int>(h));
    const std::size_t total = static_cast<std::size_t>(w) * h;
    std::size_t px = 0;
    for (std::size_t s = 0; s < offsets.size() && px < total; ++s) {
      if (static_cast<std::size_t>(offsets[s]) + counts[s] > b_.size()) bad("strip out of range");
      const std::size_t samples = counts[s] / bpp;
      for (std::size_t i = 0; i < samples && px < total; ++i, ++px) {
        const std::size_t off = offsets[s] + i * bpp;
        out.data[px] = static_cast<T>(bpp == 1 ? b_[off] : bpp == 2 ? u16(off) : u32(off));
      }
    }
    if (px != total) bad("strips hold fewer samples than the image size");
    return out;
  }

 private:
  std::vector<std::uint8_t> b_;
  std::string name_;
  bool little_ = true;
};

std::vector<std::uint8_t> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "cannot open " + path.string(), path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xff));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename T>
void write_impl(const fs::path& path, const Plane<T>& plane) {
  const std::uint32_t bits = sizeof(T) * 8;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(plane.size() * sizeof(T));
  std::vector<std::uint8_t> b;
  b.reserve(data_bytes + 256);
  b.push_back('I');
  b.push_back('I');
  put16(b, 42);
  const std::uint32_t data_off = 8;
  const std::uint32_t ifd_off = data_off + data_bytes + (data_bytes & 1);
  put32(b, ifd_off);
  for (T v : plane.data) {
    if constexpr (sizeof(T) == 2) put16(b, v);
    else put32(b, v);
  }
  if (data_bytes & 1) b.push_back(0);

  struct Entry { std::uint16_t tag, type; std::uint32_t value; };
  const Entry entries[] = {
      {kImageWidth, 4, static_cast<std::uint32_t>(plane.width)},
      {kImageLength, 4, static_cast<std::uint32_t>(plane.height)},
      {kBitsPerSample, 3, bits},
      {kCompression, 3, 1},
      {kPhotometric, 3, 1},  // BlackIsZero
      {kStripOffsets, 4, data_off},
      {kSamplesPerPixel, 3, 1},
      {kRowsPerStrip, 4, static_cast<std::uint32_t>(plane.height)},
      {kStripByteCounts, 4, data_bytes},
      {kPlanarConfig, 3, 1},
      {kSampleFormat, 3, 1},
  };
  put16(b, static_cast<std::uint16_t>(std::size(entries)));
  for (const auto& e : entries) {
    put16(b, e.tag);
    put16(b, e.type);
    put32(b, 1);
    if (e.type == 3) {
      put16(b, static_cast<std::uint16_t>(e.value));
      put16(b, 0);
    } else {
      put32(b, e.value);
    }
  }
  put32(b, 0);
  write_binary_file(path, b);
}

}  // namespace

PlaneU16 read_tiff_u16(const fs::path& path) {
  return Reader(slurp(path), path.string()).decode<std::uint16_t>(16);
}

PlaneU32 read_tiff_u32(const fs::path& path) {
  return Reader(slurp(path), path.string()).decode<std::uint32_t>(32);
}

void write_tiff(const fs::path& path, const PlaneU16& plane) { write_impl(path, plane); }
void write_tiff(const fs::path& path, const PlaneU32& plane) { write_impl(path, plane); }

}  // namespace tissuelens
