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

#include "tissuelens/png_codec.hpp"

#include <png.h>

#include <cstring>
#include <string>

#include "tissuelens/error.hpp"

namespace tissuelens {

namespace {

struct WriteState {
  Bytes* out;
};

void write_cb(png_structp png, png_bytep data, png_size_t len) {
  auto* st = static_cast<WriteState*>(png_get_io_ptr(png));
  st->out->insert(st->out->end(), data, data + len);
}

void flush_cb(png_structp) {}

struct ReadState {
  std::span<const std::uint8_t> in;
  std::size_t pos = 0;
};

void read_cb(png_structp png, png_bytep data, png_size_t len) {
  auto* st = static_cast<ReadState*>(png_get_io_ptr(png));
  if (st->pos + len > st->in.size()) png_error(png, "truncated PNG");
  std::memcpy(data, st->in.data() + st->pos, len);
  st->pos += len;
}

// libpng is C: errors unwind via longjmp to the setjmp in encode/decode,
// which then raise a C++ exception from a C++ frame.
struct ErrorSlot {
  char message[256] = {};
};

void error_cb(png_structp png, png_const_charp msg) {
  if (auto* slot = static_cast<ErrorSlot*>(png_get_error_ptr(png))) {
    std::strncpy(slot->message, msg, sizeof(slot->message) - 1);
  }
  png_longjmp(png, 1);
}

void warning_cb(png_structp, png_const_charp) {}

/// Rows are handed over as big-endian samples for 16-bit depth.
Bytes encode(int w, int h, int color_type, int bit_depth,
             const std::vector<std::vector<std::uint8_t>>& rows) {
  Bytes out;
  ErrorSlot slot;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &slot, error_cb, warning_cb);
  if (!png) fail(ErrorKind::kIo, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  WriteState st{&out};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorKind::kIo, std::string("PNG encode: ") + slot.message);
  }
  {
    png_set_write_fn(png, &st, write_cb, flush_cb);
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), bit_depth,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (const auto& row : rows) png_write_row(png, row.data());
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

template <typename Fn>
void decode(std::span<const std::uint8_t> bytes, int want_color, int want_depth, Fn&& on_rows) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    fail(ErrorKind::kInvalidArgument, "not a PNG stream");
  }
  ErrorSlot slot;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &slot, error_cb, warning_cb);
  if (!png) fail(ErrorKind::kIo, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  ReadState st{bytes};
  std::vector<std::uint8_t> row;
  bool bad_format = false;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::kInvalidArgument, std::string("PNG decode: ") + slot.message);
  }
  png_set_read_fn(png, &st, read_cb);
  png_read_info(png, info);
  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  if (png_get_color_type(png, info) != want_color || png_get_bit_depth(png, info) != want_depth) {
    bad_format = true;
  } else {
    row.resize(png_get_rowbytes(png, info));
    on_rows(w, h, [&](int) {
      png_read_row(png, row.data(), nullptr);
      return row.data();
    });
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (bad_format) fail(ErrorKind::kInvalidArgument, "unexpected PNG color type or bit depth");
}

}  // namespace

Bytes encode_png_rgba(const RgbaPlane& image) {
  std::vector<std::vector<std::uint8_t>> rows(static_cast<std::size_t>(image.height));
  for (int y = 0; y < image.height; ++y) {
    auto& r = rows[static_cast<std::size_t>(y)];
    r.reserve(static_cast<std::size_t>(image.width) * 4);
    for (const Rgba& p : image.row(y)) r.insert(r.end(), {p.r, p.g, p.b, p.a});
  }
  return encode(image.width, image.height, PNG_COLOR_TYPE_RGBA, 8, rows);
}

Bytes encode_png_gray16(const PlaneU16& plane) {
  std::vector<std::vector<std::uint8_t>> rows(static_cast<std::size_t>(plane.height));
  for (int y = 0; y < plane.height; ++y) {
    auto& r = rows[static_cast<std::size_t>(y)];
    r.reserve(static_cast<std::size_t>(plane.width) * 2);
    for (std::uint16_t v : plane.row(y)) {
      r.push_back(static_cast<std::uint8_t>(v >> 8));
      r.push_back(static_cast<std::uint8_t>(v & 0xff));
    }
  }
  return encode(plane.width, plane.height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

RgbaPlane decode_png_rgba(std::span<const std::uint8_t> png) {
  RgbaPlane out;
  decode(png, PNG_COLOR_TYPE_RGBA, 8, [&](int w, int h, auto next_row) {
    out = RgbaPlane(w, h);
    for (int y = 0; y < h; ++y) {
      const std::uint8_t* r = next_row(y);
      for (int x = 0; x < w; ++x) out.at(x, y) = {r[4 * x], r[4 * x + 1], r[4 * x + 2], r[4 * x + 3]};
    }
  });
  return out;
}

PlaneU16 decode_png_gray16(std::span<const std::uint8_t> png) {
  PlaneU16 out;
  decode(png, PNG_COLOR_TYPE_GRAY, 16, [&](int w, int h, auto next_row) {
    out = PlaneU16(w, h);
    for (int y = 0; y < h; ++y) {
      const std::uint8_t* r = next_row(y);
      for (int x = 0; x < w; ++x) {
        out.at(x, y) = static_cast<std::uint16_t>((r[2 * x] << 8) | r[2 * x + 1]);
      }
    }
  });
  return out;
}

}  // namespace tissuelens
