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

#include "tissuelens/plane_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "tissuelens/error.hpp"

namespace tissuelens {

namespace fs = std::filesystem;

namespace {

template <typename T>
T byteswap_if_big(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    T out{};
    auto* src = reinterpret_cast<const unsigned char*>(&v);
    auto* dst = reinterpret_cast<unsigned char*>(&out);
    for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
    return out;
  }
}

void ensure_parent(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) fail(ErrorKind::kIo, "cannot create directory " + path.parent_path().string(), ec.message());
}

}  // namespace

fs::path channel_tile_path(const fs::path& root, const std::string& channel,
                           int level, int tx, int ty) {
  return root / "channels" / channel / std::to_string(level) /
         (std::to_string(tx) + "_" + std::to_string(ty) + ".bin");
}

fs::path mask_tile_path(const fs::path& root, int level, int tx, int ty) {
  return root / "mask" / std::to_string(level) /
         (std::to_string(tx) + "_" + std::to_string(ty) + ".bin");
}

template <typename T>
void write_raw(const fs::path& path, const Plane<T>& plane) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(plane.data.data()),
              static_cast<std::streamsize>(plane.data.size() * sizeof(T)));
  } else {
    for (T v : plane.data) {
      T le = byteswap_if_big(v);
      out.write(reinterpret_cast<const char*>(&le), sizeof(T));
    }
  }
  if (!out) fail(ErrorKind::kIo, "short write to " + path.string());
}

template <typename T>
Plane<T> read_raw(const fs::path& path, int w, int h) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) fail(ErrorKind::kNotFound, "missing tile " + path.string(), path.string());
  const auto expected = static_cast<std::uintmax_t>(w) * h * sizeof(T);
  if (size != expected) {
    fail(ErrorKind::kIntegrity,
         "tile " + path.string() + " has " + std::to_string(size) +
             " bytes, expected " + std::to_string(expected),
         path.string());
  }
  Plane<T> plane(w, h);
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string(), path.string());
  in.read(reinterpret_cast<char*>(plane.data.data()),
          static_cast<std::streamsize>(expected));
  if (!in) fail(ErrorKind::kIntegrity, "short read from " + path.string(), path.string());
  if constexpr (std::endian::native != std::endian::little) {
    for (auto& v : plane.data) v = byteswap_if_big(v);
  }
  return plane;
}

template void write_raw<std::uint16_t>(const fs::path&, const Plane<std::uint16_t>&);
template void write_raw<std::uint32_t>(const fs::path&, const Plane<std::uint32_t>&);
template Plane<std::uint16_t> read_raw<std::uint16_t>(const fs::path&, int, int);
template Plane<std::uint32_t> read_raw<std::uint32_t>(const fs::path&, int, int);

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "cannot open " + path.string(), path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) fail(ErrorKind::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::kIo, "cannot rename " + tmp.string(), ec.message());
}

void write_binary_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "short write to " + path.string());
}

}  // namespace tissuelens
