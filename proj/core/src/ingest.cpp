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

#include "tissuelens/ingest.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "tissuelens/csv.hpp"
#include "tissuelens/error.hpp"
#include "tissuelens/pyramid.hpp"
#include "tissuelens/tiff.hpp"

namespace tissuelens {

namespace fs = std::filesystem;

DatasetMeta ingest(const IngestParams& params) {
  if (params.planes.empty()) fail(ErrorKind::kInvalidArgument, "no input planes");
  if (!(params.pixel_size_um > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "pixel size must be positive", "pixel_size_um");
  }

  DatasetMeta meta;
  meta.tile_size = params.tile_size;
  meta.pixel_size_um = params.pixel_size_um;
  std::vector<PlaneU16> planes;
  for (const auto& path : params.planes) {
    planes.push_back(read_tiff_u16(path));
    const auto& p = planes.back();
    if (planes.size() == 1) {
      meta.width_px = p.width;
      meta.height_px = p.height;
    } else if (p.width != meta.width_px || p.height != meta.height_px) {
      fail(ErrorKind::kInvalidArgument,
           "dimension mismatch: " + path.string() + " is " + std::to_string(p.width) + "x" +
               std::to_string(p.height) + ", expected " + std::to_string(meta.width_px) + "x" +
               std::to_string(meta.height_px),
           path.string());
    }
    meta.channels.push_back({path.stem().string(), std::nullopt});
  }
  meta.levels = pyramid_level_count(meta.width_px, meta.height_px, meta.tile_size);
  meta.validate();

  std::optional<PlaneU32> mask;
  if (params.mask) {
    mask = read_tiff_u32(*params.mask);
    if (mask->width != meta.width_px || mask->height != meta.height_px) {
      fail(ErrorKind::kInvalidArgument,
           "dimension mismatch: mask " + params.mask->string() + " is " +
               std::to_string(mask->width) + "x" + std::to_string(mask->height),
           params.mask->string());
    }
  }

  std::vector<std::string> names;
  for (const auto& c : meta.channels) names.push_back(c.name);
  CellCsv csv = read_cells_csv(params.csv, names);

  if (mask) {
    std::unordered_set<std::uint32_t> ids;
    for (const auto& r : csv.rows) ids.insert(r.id);
    std::set<std::uint32_t> missing;
    for (auto id : mask->data) {
      if (id != 0 && !ids.count(id)) missing.insert(id);
    }
    if (!missing.empty()) {
      std::string list;
      int shown = 0;
      for (auto id : missing) {
        if (shown++ == 20) {
          list += ", ...";
          break;
        }
        list += (list.empty() ? "" : ", ") + std::to_string(id);
      }
      fail(ErrorKind::kIntegrity,
           std::to_string(missing.size()) + " mask cell IDs missing from " +
               params.csv.string() + ": " + list,
           list);
    }
  }

  meta = build_pyramid(params.out_dir, meta, planes, mask ? &*mask : nullptr);
  write_cells_csv(params.out_dir / "cells.csv", csv);
  return meta;
}

void export_flat(const Dataset& dataset, const fs::path& out_dir) {
  const DatasetMeta& meta = dataset.meta();
  const RegionRect full{0, 0, 0, meta.width_px, meta.height_px};
  for (const auto& c : meta.channels) {
    write_tiff(out_dir / (c.name + ".tif"), dataset.read_region(c.name, full));
  }
  if (meta.has_mask) write_tiff(out_dir / "mask.tif", dataset.read_mask_region(full));
  if (fs::exists(dataset.cells_csv_path())) {
    std::error_code ec;
    fs::copy_file(dataset.cells_csv_path(), out_dir / "cells.csv",
                  fs::copy_options::overwrite_existing, ec);
    if (ec) fail(ErrorKind::kIo, "cannot copy cells.csv", ec.message());
  }
}

}  // namespace tissuelens
