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

#include "tissuelens/workspace.hpp"

#include "tissuelens/error.hpp"

namespace tissuelens {

std::shared_ptr<const Workspace> Workspace::open(const std::filesystem::path& dir,
                                                 DatasetOptions options) {
  auto ws = std::make_shared<Workspace>();
  ws->dataset_ = Dataset::open(dir, options);
  ws->meta_hash_ = tissuelens::meta_hash(ws->dataset_->meta());
  const auto csv = ws->dataset_->cells_csv_path();
  if (std::filesystem::exists(csv)) {
    ws->table_ = std::make_unique<CellTable>(CellTable::load(csv, ws->dataset_->meta()));
    ws->index_ = std::make_unique<CellIndex>(*ws->table_);
    ws->cell_types_ = ws->table_->type_map();
    ws->palette_ = TypePalette::for_types(ws->table_->type_order());
  }
  return ws;
}

const CellTable& Workspace::table() const {
  if (!table_) fail(ErrorKind::kCapability, "dataset has no cell table", "cells.csv");
  return *table_;
}

const CellIndex& Workspace::index() const {
  if (!index_) fail(ErrorKind::kCapability, "dataset has no cell table", "cells.csv");
  return *index_;
}

std::vector<std::string> Workspace::default_stats_channels() const {
  std::vector<std::string> out;
  if (!table_) return out;
  for (std::size_t c = 0; c < table_->channels().size(); ++c) {
    if (!table_->global(c).degenerate) out.push_back(table_->channels()[c]);
  }
  return out;
}

RegionStats Workspace::stats(const LensGeometry& geometry,
                             const std::vector<std::string>& channels, TypeOrder order) const {
  return compute_region_stats(table(), index(), geometry, channels, order,
                              meta().pixel_size_um);
}

}  // namespace tissuelens
