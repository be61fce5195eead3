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
#include <optional>
#include <string>
#include <vector>

#include "tissuelens/dataset.hpp"

namespace tissuelens {

struct IngestParams {
  /// One greyscale TIFF per channel; the channel name is the file stem.
  std::vector<std::filesystem::path> planes;
  std::optional<std::filesystem::path> mask;
  std::filesystem::path csv;
  std::filesystem::path out_dir;
  int tile_size = kDefaultTileSize;
  double pixel_size_um = 1.0;
};

/// Converts flat TIFF planes + mask + cells.csv into the chunked format.
/// Checks that all planes share dimensions, that the CSV has every channel
/// column, and that every non-zero mask ID has a CSV row (kIntegrity lists
/// the missing IDs otherwise).
DatasetMeta ingest(const IngestParams& params);

/// Writes level 0 of every channel as {name}.tif, the mask as mask.tif and a
/// copy of cells.csv. The inverse of ingest for datasets it produced.
void export_flat(const Dataset& dataset, const std::filesystem::path& out_dir);

}  // namespace tissuelens
