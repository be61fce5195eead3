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

#include "tissuelens/region_stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "tissuelens/error.hpp"

namespace tissuelens {

std::string_view to_string(TypeOrder order) {
  return order == TypeOrder::kLocked ? "locked" : "by_count";
}

TypeOrder parse_type_order(std::string_view text) {
  if (text == "locked") return TypeOrder::kLocked;
  if (text == "by_count") return TypeOrder::kByCount;
  fail(ErrorKind::kInvalidArgument, "unknown type order '" + std::string(text) + "'", "mode");
}

std::vector<ChannelHistogram> region_histograms(const CellTable& table,
                                                std::span<const std::uint32_t> cell_ids,
                                                const std::vector<std::string>& channels) {
  std::vector<ChannelHistogram> out;
  for (const auto& name : channels) {
    const std::size_t c = table.channel_index(name);
    const ChannelGlobalStats& g = table.global(c);
    if (g.degenerate) {
      fail(ErrorKind::kDegenerate,
           "channel '" + name + "' has no usable value range for a histogram", name);
    }
    ChannelHistogram h;
    h.channel = name;
    h.bin_edges = g.bin_edges;
    h.global_counts = g.global_counts;
    h.counts.assign(g.global_counts.size(), 0);
    h.global_mean = g.mean;
    double sum = 0.0;
    for (auto id : cell_ids) {
      const double v = table.cells()[table.row_of(id)].means[c];
      sum += v;
      if (v < g.p1 || v > g.p99) {
        ++h.clipped;
        continue;
      }
      if (auto b = histogram_bin(std::log2(v + 1.0), g.bin_edges)) ++h.counts[*b];
      else ++h.clipped;
    }
    if (!cell_ids.empty()) h.region_mean = sum / static_cast<double>(cell_ids.size());
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<RadialMean> radial_means(const CellTable& table,
                                     std::span<const std::uint32_t> cell_ids) {
  std::vector<RadialMean> out;
  std::vector<double> sums(table.channels().size(), 0.0);
  for (auto id : cell_ids) {
    const auto& means = table.cells()[table.row_of(id)].means;
    for (std::size_t c = 0; c < sums.size(); ++c) sums[c] += means[c];
  }
  for (std::size_t c = 0; c < sums.size(); ++c) {
    RadialMean r{table.channels()[c], std::nullopt, table.global(c).mean};
    if (!cell_ids.empty()) r.region_mean = sums[c] / static_cast<double>(cell_ids.size());
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TypeCount> type_counts(const CellTable& table,
                                   std::span<const std::uint32_t> cell_ids, TypeOrder order) {
  std::map<std::string, std::uint64_t> counts;
  for (auto id : cell_ids) {
    const auto& type = table.cells()[table.row_of(id)].cell_type;
    if (type) ++counts[*type];
  }
  std::vector<TypeCount> out;
  if (order == TypeOrder::kLocked) {
    for (const auto& t : table.type_order()) {
      auto it = counts.find(t);
      out.emplace_back(t, it == counts.end() ? 0 : it->second);
    }
    return out;
  }
  out.assign(counts.begin(), counts.end());  // alphabetical
  std::stable_sort(out.begin(), out.end(),
                   [](const TypeCount& a, const TypeCount& b) { return a.second > b.second; });
  return out;
}

std::vector<std::uint32_t> brush_filter(const CellTable& table,
                                        std::span<const std::uint32_t> cell_ids,
                                        std::string_view channel, double lo, double hi) {
  if (lo > hi) fail(ErrorKind::kInvalidArgument, "brush range has lo > hi", "range");
  const std::size_t c = table.channel_index(channel);
  std::vector<std::uint32_t> out;
  for (auto id : cell_ids) {
    const double t = std::log2(table.cells()[table.row_of(id)].means[c] + 1.0);
    if (t >= lo && t <= hi) out.push_back(id);
  }
  return out;
}

double region_area_um2(const LensGeometry& g, double pixel_size_um) {
  if (!(pixel_size_um > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "pixel_size_um must be positive", "pixel_size_um");
  }
  const double px2 = g.shape == LensShape::kCircle ? std::numbers::pi * g.radius * g.radius
                                                   : 4.0 * g.half_w * g.half_h;
  return px2 * pixel_size_um * pixel_size_um;
}

RegionStats compute_region_stats(const CellTable& table, const CellIndex& index,
                                 const LensGeometry& geometry,
                                 const std::vector<std::string>& histogram_channels,
                                 TypeOrder order, double pixel_size_um) {
  RegionStats s;
  s.cell_ids = index.query_region(geometry);
  s.n_cells = s.cell_ids.size();
  s.empty = s.cell_ids.empty();
  s.histograms = region_histograms(table, s.cell_ids, histogram_channels);
  s.radial_means = radial_means(table, s.cell_ids);
  s.type_counts = type_counts(table, s.cell_ids, order);
  s.area_um2 = region_area_um2(geometry, pixel_size_um);
  return s;
}

}  // namespace tissuelens
