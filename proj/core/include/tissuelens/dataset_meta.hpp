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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tissuelens {

struct ChannelMeta {
  std::string name;
  std::optional<std::string> modality_group;
  friend bool operator==(const ChannelMeta&, const ChannelMeta&) = default;
};

struct LevelDims {
  int width = 0;
  int height = 0;
  friend bool operator==(const LevelDims&, const LevelDims&) = default;
};

/// Describes a chunked multi-resolution dataset on disk.
///
/// Level l has dimensions ceil(width / 2^l) x ceil(height / 2^l); the number
/// of levels is the smallest count whose coarsest level fits into a single
/// tile (always at least 1).
struct DatasetMeta {
  int width_px = 0;
  int height_px = 0;
  double pixel_size_um = 1.0;
  int tile_size = 1024;
  int levels = 1;
  std::vector<ChannelMeta> channels;
  bool has_mask = false;

  LevelDims level_dims(int level) const;
  int tiles_x(int level) const;
  int tiles_y(int level) const;
  /// Width/height of tile (tx, ty) at `level`; edge tiles are truncated.
  LevelDims tile_dims(int level, int tx, int ty) const;

  /// Index of `name` in `channels`; throws kLookup when absent.
  std::size_t channel_index(std::string_view name) const;
  bool has_channel(std::string_view name) const;

  /// Checks every invariant; throws kSchema with the offending field path.
  void validate() const;

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

constexpr int kDefaultTileSize = 1024;

/// Level count for a plane of the given size. Pure integer arithmetic, no
/// allocation: counts halvings (with ceiling) until the larger side fits in
/// one tile.
int pyramid_level_count(int width_px, int height_px, int tile_size);

/// Dimensions of every level, level 0 first.
std::vector<LevelDims> pyramid_level_dims(int width_px, int height_px,
                                          int levels);

nlohmann::json to_json(const DatasetMeta& meta);
/// Parses and validates; schema errors carry a JSON-pointer style field path.
DatasetMeta meta_from_json(const nlohmann::json& j);

/// 64-bit FNV-1a over the canonical meta.json text, as 16 hex digits.
std::string meta_hash(const DatasetMeta& meta);

}  // namespace tissuelens
