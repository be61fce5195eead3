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
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "tissuelens/csv.hpp"
#include "tissuelens/dataset_meta.hpp"
#include "tissuelens/plane.hpp"

namespace tissuelens {

struct SyntheticParams {
  std::uint64_t seed = 1;
  int width = 512;
  int height = 512;
  int n_channels = 3;
  int n_cells = 100;
  int n_patterns = 0;
  int tile_size = kDefaultTileSize;
  double pixel_size_um = 0.325;
  double cell_radius_min = 4.0;
  double cell_radius_max = 8.0;
  /// Planted texture patches are squares of side 2*half+1.
  int pattern_half_size = 32;
  std::uint16_t background_level = 200;
  std::uint16_t noise_amplitude = 60;
};

struct PlantedCell {
  std::uint32_t id = 0;
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  std::string type;
};

struct PlantedPattern {
  int cx = 0;
  int cy = 0;
  int half_size = 0;
};

/// Ground truth recorded by the generator.
struct SyntheticManifest {
  std::uint64_t seed = 0;
  std::vector<PlantedCell> cells;
  std::vector<PlantedPattern> patterns;
};

/// In-memory synthetic dataset (level 0 only).
struct SyntheticData {
  DatasetMeta meta;
  std::vector<PlaneU16> planes;
  PlaneU32 mask;
  CellCsv cells;
  SyntheticManifest manifest;
};

/// Deterministic for a given `params`. Cells are non-overlapping disks with
/// per-channel Gaussian intensity profiles on a noisy background; planted
/// patterns are identical copies of one seeded texture patch, kept clear of
/// cells. cells.csv means are the exact mask-pixel means of the emitted
/// planes. Throws kInvalidArgument when the requested layout is infeasible.
SyntheticData make_synthetic(const SyntheticParams& params);

/// Writes the pyramid, cells.csv and manifest.json into `dir`.
void write_synthetic(const std::filesystem::path& dir, const SyntheticData& data);

/// make_synthetic + write_synthetic. Returns the path of manifest.json.
std::filesystem::path generate_synthetic(const std::filesystem::path& dir,
                                         const SyntheticParams& params);

nlohmann::json to_json(const SyntheticManifest& manifest);
SyntheticManifest manifest_from_json(const nlohmann::json& j);

/// Exact arithmetic mean of `plane` over the pixels labelled `id` in `mask`
/// for every label 1..max_id (index 0 unused). Labels without pixels get 0.
std::vector<double> mask_means(const PlaneU16& plane, const PlaneU32& mask,
                               std::uint32_t max_id);

}  // namespace tissuelens
