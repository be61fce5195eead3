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
#include <vector>

#include "tissuelens/cell_table.hpp"
#include "tissuelens/dataset.hpp"
#include "tissuelens/region_stats.hpp"
#include "tissuelens/render.hpp"

namespace tissuelens {

/// An open dataset with its cell table, spatial index and type palette.
/// Immutable after open; share freely between threads.
class Workspace {
 public:
  static std::shared_ptr<const Workspace> open(const std::filesystem::path& dir,
                                               DatasetOptions options = {});

  const Dataset& dataset() const { return *dataset_; }
  const DatasetMeta& meta() const { return dataset_->meta(); }
  std::string meta_hash() const { return meta_hash_; }

  bool has_cells() const { return table_ != nullptr; }
  /// kCapability when the dataset has no cells.csv.
  const CellTable& table() const;
  const CellIndex& index() const;

  const CellTypeMap& cell_types() const { return cell_types_; }
  const TypePalette& palette() const { return palette_; }
  CellOverlay overlay() const { return {&cell_types_, palette_}; }

  /// Table channels with a usable histogram range, in table order.
  std::vector<std::string> default_stats_channels() const;

  RegionStats stats(const LensGeometry& geometry, const std::vector<std::string>& channels,
                    TypeOrder order) const;

 private:
  std::shared_ptr<const Dataset> dataset_;
  std::string meta_hash_;
  std::unique_ptr<CellTable> table_;
  std::unique_ptr<CellIndex> index_;
  CellTypeMap cell_types_;
  TypePalette palette_;
};

}  // namespace tissuelens
