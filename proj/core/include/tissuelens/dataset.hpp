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

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tissuelens/dataset_meta.hpp"
#include "tissuelens/plane.hpp"
#include "tissuelens/tile_cache.hpp"

namespace tissuelens {

/// Half-open rectangle [x0,x1) x [y0,y1) in the pixel grid of `level`.
struct RegionRect {
  int level = 0;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  friend bool operator==(const RegionRect&, const RegionRect&) = default;
};

struct DatasetOptions {
  std::size_t cache_tiles_per_channel = 256;
  /// Stat every tile file at open and reject size mismatches up front.
  bool verify_tiles_on_open = true;
};

/// Read-only handle to an on-disk dataset. Safe to share between threads;
/// all reads are pure and the tile caches synchronize internally.
class Dataset {
 public:
  static std::shared_ptr<const Dataset> open(const std::filesystem::path& dir,
                                             DatasetOptions options = {});

  const DatasetMeta& meta() const { return meta_; }
  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path cells_csv_path() const { return root_ / "cells.csv"; }

  PlaneU16 read_region(std::string_view channel, const RegionRect& region) const;
  PlaneU32 read_mask_region(const RegionRect& region) const;

  /// Raw stored tile (edge tiles truncated).
  PlaneU16 read_tile(std::string_view channel, int level, int tx, int ty) const;

  /// Throws kBounds unless 0 <= x0 < x1 <= level width (same for y).
  void check_region(const RegionRect& region) const;

  CacheStats cache_stats(std::string_view channel) const;
  CacheStats mask_cache_stats() const;

  Dataset(std::filesystem::path root, DatasetMeta meta, DatasetOptions options);

 private:
  template <typename T, typename PathFn>
  Plane<T> assemble(TileCache<T>& cache, const RegionRect& region, PathFn&& path) const;

  std::filesystem::path root_;
  DatasetMeta meta_;
  DatasetOptions options_;
  std::vector<std::unique_ptr<TileCache<std::uint16_t>>> channel_caches_;
  std::unique_ptr<TileCache<std::uint32_t>> mask_cache_;
};

}  // namespace tissuelens
