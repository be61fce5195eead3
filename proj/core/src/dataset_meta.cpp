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

#include "tissuelens/dataset_meta.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "tissuelens/error.hpp"

namespace tissuelens {

namespace {

int ceil_shift(int v, int level) {
  const std::int64_t scale = std::int64_t{1} << level;
  return static_cast<int>((v + scale - 1) / scale);
}

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  fail(ErrorKind::kSchema, "meta.json: " + field + ": " + what, field);
}

bool valid_channel_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  for (char c : name) {
    if (c == '/' || c == '\\' || c == ',' || c == '"' || c == '\n' || c == '\r' ||
        c == '\0') {
      return false;
    }
  }
  return true;
}

}  // namespace

int pyramid_level_count(int width_px, int height_px, int tile_size) {
  if (width_px <= 0 || height_px <= 0 || tile_size <= 0) {
    fail(ErrorKind::kInvalidArgument, "pyramid dimensions must be positive");
  }
  std::int64_t extent = std::max(width_px, height_px);
  int levels = 1;
  while (extent > tile_size) {
    extent = (extent + 1) / 2;
    ++levels;
  }
  return levels;
}

std::vector<LevelDims> pyramid_level_dims(int width_px, int height_px,
                                          int levels) {
  std::vector<LevelDims> dims;
  dims.reserve(static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) {
    dims.push_back({ceil_shift(width_px, l), ceil_shift(height_px, l)});
  }
  return dims;
}

LevelDims DatasetMeta::level_dims(int level) const {
  if (level < 0 || level >= levels) {
    fail(ErrorKind::kBounds, "level " + std::to_string(level) + " out of range");
  }
  return {ceil_shift(width_px, level), ceil_shift(height_px, level)};
}

int DatasetMeta::tiles_x(int level) const {
  return (level_dims(level).width + tile_size - 1) / tile_size;
}

int DatasetMeta::tiles_y(int level) const {
  return (level_dims(level).height + tile_size - 1) / tile_size;
}

LevelDims DatasetMeta::tile_dims(int level, int tx, int ty) const {
  const LevelDims d = level_dims(level);
  if (tx < 0 || ty < 0 || tx >= tiles_x(level) || ty >= tiles_y(level)) {
    fail(ErrorKind::kNotFound, "tile (" + std::to_string(tx) + ", " +
                                   std::to_string(ty) + ") outside level " +
                                   std::to_string(level));
  }
  return {std::min(tile_size, d.width - tx * tile_size),
          std::min(tile_size, d.height - ty * tile_size)};
}

std::size_t DatasetMeta::channel_index(std::string_view name) const {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].name == name) return i;
  }
  fail(ErrorKind::kLookup, "unknown channel '" + std::string(name) + "'",
       std::string(name));
}

bool DatasetMeta::has_channel(std::string_view name) const {
  for (const auto& c : channels) {
    if (c.name == name) return true;
  }
  return false;
}

void DatasetMeta::validate() const {
  if (width_px <= 0) schema_error("/width_px", "must be a positive integer");
  if (height_px <= 0) schema_error("/height_px", "must be a positive integer");
  if (!(pixel_size_um > 0.0) || !std::isfinite(pixel_size_um)) {
    schema_error("/pixel_size_um", "must be a positive number");
  }
  if (tile_size <= 0 || (tile_size & (tile_size - 1)) != 0) {
    schema_error("/tile_size", "must be a positive power of two");
  }
  const int expected = pyramid_level_count(width_px, height_px, tile_size);
  if (levels != expected) {
    schema_error("/levels", "expected " + std::to_string(expected) + ", found " +
                                std::to_string(levels));
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const std::string path = "/channels/" + std::to_string(i) + "/name";
    if (!valid_channel_name(channels[i].name)) {
      schema_error(path, "invalid channel name '" + channels[i].name + "'");
    }
    if (!seen.insert(channels[i].name).second) {
      schema_error(path, "duplicate channel name '" + channels[i].name + "'");
    }
  }
}

nlohmann::json to_json(const DatasetMeta& meta) {
  nlohmann::json channels = nlohmann::json::array();
  for (const auto& c : meta.channels) {
    channels.push_back({{"name", c.name},
                        {"modality_group", c.modality_group
                                               ? nlohmann::json(*c.modality_group)
                                               : nlohmann::json(nullptr)}});
  }
  return {{"width_px", meta.width_px},       {"height_px", meta.height_px},
          {"pixel_size_um", meta.pixel_size_um}, {"tile_size", meta.tile_size},
          {"levels", meta.levels},           {"channels", std::move(channels)},
          {"has_mask", meta.has_mask}};
}

DatasetMeta meta_from_json(const nlohmann::json& j) {
  if (!j.is_object()) schema_error("/", "expected an object");
  auto require = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end()) schema_error(std::string("/") + key, "missing field");
    return *it;
  };
  auto integer = [&](const char* key) {
    const auto& v = require(key);
    if (!v.is_number_integer()) schema_error(std::string("/") + key, "expected an integer");
    const auto value = v.get<std::int64_t>();
    if (value < 0 || value > (std::int64_t{1} << 30)) {
      schema_error(std::string("/") + key, "out of range");
    }
    return static_cast<int>(value);
  };

  DatasetMeta meta;
  meta.width_px = integer("width_px");
  meta.height_px = integer("height_px");
  {
    const auto& v = require("pixel_size_um");
    if (!v.is_number()) schema_error("/pixel_size_um", "expected a number");
    meta.pixel_size_um = v.get<double>();
  }
  meta.tile_size = integer("tile_size");
  meta.levels = integer("levels");
  {
    const auto& v = require("has_mask");
    if (!v.is_boolean()) schema_error("/has_mask", "expected a boolean");
    meta.has_mask = v.get<bool>();
  }
  const auto& channels = require("channels");
  if (!channels.is_array()) schema_error("/channels", "expected an array");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto& c = channels[i];
    const std::string base = "/channels/" + std::to_string(i);
    if (!c.is_object()) schema_error(base, "expected an object");
    auto name = c.find("name");
    if (name == c.end() || !name->is_string()) {
      schema_error(base + "/name", "expected a string");
    }
    ChannelMeta cm{name->get<std::string>(), std::nullopt};
    auto group = c.find("modality_group");
    if (group != c.end() && !group->is_null()) {
      if (!group->is_string()) schema_error(base + "/modality_group", "expected a string or null");
      cm.modality_group = group->get<std::string>();
    }
    meta.channels.push_back(std::move(cm));
  }
  meta.validate();
  return meta;
}

std::string meta_hash(const DatasetMeta& meta) {
  const std::string text = to_json(meta).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tissuelens
