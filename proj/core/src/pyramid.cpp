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

#include "tissuelens/pyramid.hpp"

#include <algorithm>
#include <array>

#include "tissuelens/error.hpp"
#include "tissuelens/plane_io.hpp"

namespace tissuelens {

namespace fs = std::filesystem;

std::uint16_t block_mean(std::span<const std::uint16_t> samples) {
  const std::uint64_t n = samples.size();
  std::uint64_t sum = 0;
  for (auto v : samples) sum += v;
  // floor(sum / n + 1/2)
  return static_cast<std::uint16_t>((2 * sum + n) / (2 * n));
}

std::uint32_t block_majority_label(std::span<const std::uint32_t> labels) {
  std::uint32_t best = 0;
  int best_count = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint32_t id = labels[i];
    if (id == 0) continue;
    int count = 0;
    for (auto other : labels) count += other == id ? 1 : 0;
    if (count > best_count || (count == best_count && id < best)) {
      best = id;
      best_count = count;
    }
  }
  return best;
}

namespace {

template <typename T, typename Reduce>
Plane<T> downsample(const Plane<T>& plane, Reduce reduce) {
  const int w = (plane.width + 1) / 2;
  const int h = (plane.height + 1) / 2;
  Plane<T> out(w, h);
  std::array<T, 4> block{};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t n = 0;
      for (int dy = 0; dy < 2; ++dy) {
        const int sy = 2 * y + dy;
        if (sy >= plane.height) continue;
        for (int dx = 0; dx < 2; ++dx) {
          const int sx = 2 * x + dx;
          if (sx >= plane.width) continue;
          block[n++] = plane.at(sx, sy);
        }
      }
      out.at(x, y) = reduce(std::span<const T>(block.data(), n));
    }
  }
  return out;
}

template <typename T, typename PathFn>
void write_level_tiles(const Plane<T>& plane, int tile_size, PathFn&& path) {
  for (int ty = 0; ty * tile_size < plane.height; ++ty) {
    for (int tx = 0; tx * tile_size < plane.width; ++tx) {
      const int x0 = tx * tile_size, y0 = ty * tile_size;
      const int x1 = std::min(plane.width, x0 + tile_size);
      const int y1 = std::min(plane.height, y0 + tile_size);
      write_raw(path(tx, ty), plane.crop(x0, y0, x1, y1));
    }
  }
}

}  // namespace

PlaneU16 downsample_mean(const PlaneU16& plane) {
  return downsample(plane, [](std::span<const std::uint16_t> s) { return block_mean(s); });
}

PlaneU32 downsample_labels(const PlaneU32& plane) {
  return downsample(plane,
                    [](std::span<const std::uint32_t> s) { return block_majority_label(s); });
}

DatasetMeta build_pyramid(const fs::path& out_dir, DatasetMeta meta,
                          std::span<const PlaneU16> level0, const PlaneU32* mask) {
  if (level0.size() != meta.channels.size()) {
    fail(ErrorKind::kInvalidArgument,
         "got " + std::to_string(level0.size()) + " planes for " +
             std::to_string(meta.channels.size()) + " channels");
  }
  auto check_dims = [&](int w, int h, const std::string& what) {
    if (w != meta.width_px || h != meta.height_px) {
      fail(ErrorKind::kInvalidArgument,
           what + " is " + std::to_string(w) + "x" + std::to_string(h) +
               ", dataset is " + std::to_string(meta.width_px) + "x" +
               std::to_string(meta.height_px),
           what);
    }
  };
  for (std::size_t i = 0; i < level0.size(); ++i) {
    check_dims(level0[i].width, level0[i].height, "channel " + meta.channels[i].name);
  }
  if (mask) check_dims(mask->width, mask->height, "mask");

  meta.has_mask = mask != nullptr;
  meta.levels = pyramid_level_count(meta.width_px, meta.height_px, meta.tile_size);
  meta.validate();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create " + out_dir.string(), ec.message());

  for (std::size_t c = 0; c < level0.size(); ++c) {
    const std::string& name = meta.channels[c].name;
    PlaneU16 current = level0[c];
    for (int level = 0; level < meta.levels; ++level) {
      if (level > 0) current = downsample_mean(current);
      write_level_tiles(current, meta.tile_size, [&](int tx, int ty) {
        return channel_tile_path(out_dir, name, level, tx, ty);
      });
    }
  }
  if (mask) {
    PlaneU32 current = *mask;
    for (int level = 0; level < meta.levels; ++level) {
      if (level > 0) current = downsample_labels(current);
      write_level_tiles(current, meta.tile_size, [&](int tx, int ty) {
        return mask_tile_path(out_dir, level, tx, ty);
      });
    }
  }
  write_text_file_atomic(out_dir / "meta.json", to_json(meta).dump(2) + "\n");
  return meta;
}

}  // namespace tissuelens
