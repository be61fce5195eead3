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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tissuelens/ball_tree.hpp"
#include "tissuelens/csv.hpp"
#include "tissuelens/dataset_meta.hpp"

namespace tissuelens {

struct CellRecord {
  std::uint32_t cell_id = 0;
  double x = 0.0;
  double y = 0.0;
  std::vector<double> means;  // one per dataset channel, dataset order
  std::optional<std::string> cell_type;
  friend bool operator==(const CellRecord&, const CellRecord&) = default;
};

constexpr int kHistogramBins = 30;

/// Whole-table statistics for one channel, computed once at load.
struct ChannelGlobalStats {
  double mean = 0.0;
  double p1 = 0.0;   // nearest-rank 1st percentile of raw values
  double p99 = 0.0;  // nearest-rank 99th percentile
  std::size_t distinct_values = 0;
  /// Fewer than two distinct values, or P1 == P99: no histogram range.
  bool degenerate = true;
  std::vector<double> bin_edges;          // 31 edges in log2(v + 1) space
  std::vector<std::uint64_t> global_counts;  // all cells, clipped like regions
};

/// Nearest-rank percentile (P in (0, 100]) of an ascending sample.
double nearest_rank_percentile(const std::vector<double>& sorted, double percent);

/// Bin of a log-transformed value within `edges`, or nullopt outside.
std::optional<int> histogram_bin(double log_value, const std::vector<double>& edges);

/// Immutable single-cell feature table.
class CellTable {
 public:
  /// Requires CellID, X, Y and every dataset channel column. Duplicate IDs
  /// raise kIntegrity naming the ID; coordinates outside the image raise
  /// kIntegrity too.
  static CellTable load(const std::filesystem::path& csv, const DatasetMeta& meta);
  static CellTable from_csv(CellCsv csv, const DatasetMeta& meta);

  const std::vector<CellRecord>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  const std::vector<std::string>& channels() const { return channels_; }
  std::size_t channel_index(std::string_view name) const;  // kLookup if unknown
  const ChannelGlobalStats& global(std::size_t channel) const { return global_[channel]; }

  /// Row of a cell ID; kNotFound if absent.
  std::size_t row_of(std::uint32_t cell_id) const;
  bool contains(std::uint32_t cell_id) const { return rows_.count(cell_id) != 0; }

  /// Cell types in first-seen order.
  const std::vector<std::string>& type_order() const { return type_order_; }
  std::unordered_map<std::uint32_t, std::string> type_map() const;

  std::vector<Point> positions() const;

 private:
  std::vector<std::string> channels_;
  std::vector<CellRecord> cells_;
  std::unordered_map<std::uint32_t, std::size_t> rows_;
  std::vector<ChannelGlobalStats> global_;
  std::vector<std::string> type_order_;
};

/// Table plus its ball-tree; queries return sorted cell IDs.
class CellIndex {
 public:
  explicit CellIndex(const CellTable& table, std::size_t leaf_size = BallTree::kDefaultLeafSize);
  std::vector<std::uint32_t> query_region(const LensGeometry& geometry) const;
  const BallTree& tree() const { return tree_; }

 private:
  const CellTable* table_;
  BallTree tree_;
};

}  // namespace tissuelens
