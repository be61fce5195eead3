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

#include "tissuelens/cell_table.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tissuelens/error.hpp"

namespace tissuelens {

double nearest_rank_percentile(const std::vector<double>& sorted, double percent) {
  if (sorted.empty()) fail(ErrorKind::kDegenerate, "percentile of an empty sample");
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::optional<int> histogram_bin(double log_value, const std::vector<double>& edges) {
  const double lo = edges.front(), hi = edges.back();
  if (log_value < lo || log_value > hi) return std::nullopt;
  const int bins = static_cast<int>(edges.size()) - 1;
  const int b = static_cast<int>(std::floor((log_value - lo) / (hi - lo) * bins));
  return std::clamp(b, 0, bins - 1);
}

CellTable CellTable::load(const std::filesystem::path& csv, const DatasetMeta& meta) {
  std::vector<std::string> names;
  for (const auto& c : meta.channels) names.push_back(c.name);
  return from_csv(read_cells_csv(csv, names), meta);
}

CellTable CellTable::from_csv(CellCsv csv, const DatasetMeta& meta) {
  CellTable t;
  for (const auto& c : meta.channels) t.channels_.push_back(c.name);
  if (csv.channels != t.channels_) {
    fail(ErrorKind::kSchema, "cell table channels do not match the dataset", "channels");
  }
  std::unordered_set<std::string> seen_types;
  t.cells_.reserve(csv.rows.size());
  for (auto& row : csv.rows) {
    if (!t.rows_.emplace(row.id, t.cells_.size()).second) {
      fail(ErrorKind::kIntegrity, "duplicate CellID " + std::to_string(row.id),
           std::to_string(row.id));
    }
    if (!(row.x >= 0 && row.x <= meta.width_px && row.y >= 0 && row.y <= meta.height_px)) {
      fail(ErrorKind::kIntegrity,
           "cell " + std::to_string(row.id) + " lies outside the image bounds",
           std::to_string(row.id));
    }
    for (double m : row.means) {
      if (!(m >= 0.0) || !std::isfinite(m)) {
        fail(ErrorKind::kIntegrity,
             "cell " + std::to_string(row.id) + " has a negative or non-finite mean",
             std::to_string(row.id));
      }
    }
    if (row.type && seen_types.insert(*row.type).second) t.type_order_.push_back(*row.type);
    t.cells_.push_back({row.id, row.x, row.y, std::move(row.means), std::move(row.type)});
  }

  t.global_.resize(t.channels_.size());
  std::vector<double> values(t.cells_.size());
  for (std::size_t c = 0; c < t.channels_.size(); ++c) {
    ChannelGlobalStats& g = t.global_[c];
    double sum = 0.0;
    for (std::size_t i = 0; i < t.cells_.size(); ++i) {
      values[i] = t.cells_[i].means[c];
      sum += values[i];
    }
    if (t.cells_.empty()) continue;
    g.mean = sum / static_cast<double>(t.cells_.size());
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    g.distinct_values = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i] != sorted[i - 1]) ++g.distinct_values;
    }
    g.p1 = nearest_rank_percentile(sorted, 1.0);
    g.p99 = nearest_rank_percentile(sorted, 99.0);
    g.degenerate = g.distinct_values < 2 || !(g.p1 < g.p99);
    if (g.degenerate) continue;
    const double lo = std::log2(g.p1 + 1.0), hi = std::log2(g.p99 + 1.0);
    g.bin_edges.resize(kHistogramBins + 1);
    for (int k = 0; k <= kHistogramBins; ++k) g.bin_edges[k] = lo + (hi - lo) * k / kHistogramBins;
    g.bin_edges.back() = hi;
    g.global_counts.assign(kHistogramBins, 0);
    for (double v : values) {
      if (v < g.p1 || v > g.p99) continue;
      if (auto b = histogram_bin(std::log2(v + 1.0), g.bin_edges)) ++g.global_counts[*b];
    }
  }
  return t;
}

std::size_t CellTable::channel_index(std::string_view name) const {
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i] == name) return i;
  }
  fail(ErrorKind::kLookup, "unknown channel '" + std::string(name) + "'", std::string(name));
}

std::size_t CellTable::row_of(std::uint32_t cell_id) const {
  auto it = rows_.find(cell_id);
  if (it == rows_.end()) fail(ErrorKind::kNotFound, "unknown cell " + std::to_string(cell_id));
  return it->second;
}

std::unordered_map<std::uint32_t, std::string> CellTable::type_map() const {
  std::unordered_map<std::uint32_t, std::string> m;
  for (const auto& c : cells_) {
    if (c.cell_type) m.emplace(c.cell_id, *c.cell_type);
  }
  return m;
}

std::vector<Point> CellTable::positions() const {
  std::vector<Point> pts;
  pts.reserve(cells_.size());
  for (const auto& c : cells_) pts.push_back({c.x, c.y});
  return pts;
}

CellIndex::CellIndex(const CellTable& table, std::size_t leaf_size)
    : table_(&table), tree_(table.positions(), leaf_size) {}

std::vector<std::uint32_t> CellIndex::query_region(const LensGeometry& geometry) const {
  geometry.validate(/*allow_zero=*/true);
  std::vector<std::uint32_t> ids;
  for (auto row : tree_.query(geometry)) ids.push_back(table_->cells()[row].cell_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace tissuelens
