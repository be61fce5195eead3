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

#include "tissuelens/dataset.hpp"

#include <system_error>

#include "tissuelens/error.hpp"
#include "tissuelens/plane_io.hpp"

namespace tissuelens {

namespace fs = std::filesystem;

namespace {

void verify_tile_sizes(const fs::path& root, const DatasetMeta& meta) {
  auto check = [](const fs::path& path, std::uintmax_t expected) {
    std::error_code ec;
    const auto size = fs::file_size(path, ec);
    if (ec) fail(ErrorKind::kIntegrity, "missing tile " + path.string(), path.string());
    if (size != expected) {
      fail(ErrorKind::kIntegrity,
           "tile " + path.string() + " has " + std::to_string(size) +
               " bytes, expected " + std::to_string(expected),
           path.string());
    }
  };
  for (int level = 0; level < meta.levels; ++level) {
    for (int ty = 0; ty < meta.tiles_y(level); ++ty) {
      for (int tx = 0; tx < meta.tiles_x(level); ++tx) {
        const LevelDims td = meta.tile_dims(level, tx, ty);
        const auto px = static_cast<std::uintmax_t>(td.width) * td.height;
        for (const auto& c : meta.channels) {
          check(channel_tile_path(root, c.name, level, tx, ty), px * 2);
        }
        if (meta.has_mask) check(mask_tile_path(root, level, tx, ty), px * 4);
      }
    }
  }
}

}  // namespace

Dataset::Dataset(fs::path root, DatasetMeta meta, DatasetOptions options)
    : root_(std::move(root)), meta_(std::move(meta)), options_(options) {
  for (std::size_t i = 0; i < meta_.channels.size(); ++i) {
    channel_caches_.push_back(
        std::make_unique<TileCache<std::uint16_t>>(options_.cache_tiles_per_channel));
  }
  mask_cache_ = std::make_unique<TileCache<std::uint32_t>>(options_.cache_tiles_per_channel);
}

std::shared_ptr<const Dataset> Dataset::open(const fs::path& dir, DatasetOptions options) {
  const fs::path meta_path = dir / "meta.json";
  if (!fs::is_regular_file(meta_path)) {
    fail(ErrorKind::kSchema, "no meta.json in " + dir.string(), "/");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(meta_path));
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::kSchema, "meta.json is not valid JSON: " + std::string(e.what()), "/");
  }
  DatasetMeta meta = meta_from_json(j);
  if (options.verify_tiles_on_open) verify_tile_sizes(dir, meta);
  return std::make_shared<const Dataset>(dir, std::move(meta), options);
}

void Dataset::check_region(const RegionRect& r) const {
  if (r.level < 0 || r.level >= meta_.levels) {
    fail(ErrorKind::kBounds, "level " + std::to_string(r.level) + " out of range", "level");
  }
  const LevelDims d = meta_.level_dims(r.level);
  if (r.x0 < 0 || r.x0 >= r.x1 || r.x1 > d.width || r.y0 < 0 || r.y0 >= r.y1 ||
      r.y1 > d.height) {
    fail(ErrorKind::kBounds,
         "region [" + std::to_string(r.x0) + "," + std::to_string(r.x1) + ")x[" +
             std::to_string(r.y0) + "," + std::to_string(r.y1) + ") outside level " +
             std::to_string(r.level) + " (" + std::to_string(d.width) + "x" +
             std::to_string(d.height) + ")",
         "region");
  }
}

template <typename T, typename PathFn>
Plane<T> Dataset::assemble(TileCache<T>& cache, const RegionRect& r, PathFn&& path) const {
  check_region(r);
  const int ts = meta_.tile_size;
  Plane<T> out(r.width(), r.height());
  for (int ty = r.y0 / ts; ty <= (r.y1 - 1) / ts; ++ty) {
    for (int tx = r.x0 / ts; tx <= (r.x1 - 1) / ts; ++tx) {
      const LevelDims td = meta_.tile_dims(r.level, tx, ty);
      auto tile = cache.get({r.level, tx, ty}, [&] {
        return read_raw<T>(path(r.level, tx, ty), td.width, td.height);
      });
      const int gx0 = std::max(r.x0, tx * ts), gx1 = std::min(r.x1, tx * ts + td.width);
      const int gy0 = std::max(r.y0, ty * ts), gy1 = std::min(r.y1, ty * ts + td.height);
      for (int gy = gy0; gy < gy1; ++gy) {
        const T* src = &tile->at(gx0 - tx * ts, gy - ty * ts);
        std::copy(src, src + (gx1 - gx0), &out.at(gx0 - r.x0, gy - r.y0));
      }
    }
  }
  return out;
}

PlaneU16 Dataset::read_region(std::string_view channel, const RegionRect& region) const {
  const std::size_t idx = meta_.channel_index(channel);
  const std::string& name = meta_.channels[idx].name;
  return assemble(*channel_caches_[idx], region, [&](int l, int tx, int ty) {
    return channel_tile_path(root_, name, l, tx, ty);
  });
}

PlaneU32 Dataset::read_mask_region(const RegionRect& region) const {
  if (!meta_.has_mask) {
    fail(ErrorKind::kCapability, "dataset has no segmentation mask", "has_mask");
  }
  return assemble(*mask_cache_, region, [&](int l, int tx, int ty) {
    return mask_tile_path(root_, l, tx, ty);
  });
}

PlaneU16 Dataset::read_tile(std::string_view channel, int level, int tx, int ty) const {
  if (level < 0 || level >= meta_.levels) {
    fail(ErrorKind::kNotFound, "level " + std::to_string(level) + " out of range");
  }
  const LevelDims td = meta_.tile_dims(level, tx, ty);
  const int ts = meta_.tile_size;
  return read_region(channel, {level, tx * ts, ty * ts, tx * ts + td.width, ty * ts + td.height});
}

CacheStats Dataset::cache_stats(std::string_view channel) const {
  return channel_caches_[meta_.channel_index(channel)]->stats();
}

CacheStats Dataset::mask_cache_stats() const { return mask_cache_->stats(); }

}  // namespace tissuelens
