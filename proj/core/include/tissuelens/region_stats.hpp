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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tissuelens/cell_table.hpp"
#include "tissuelens/geometry.hpp"

namespace tissuelens {

/// Region histogram of log2(v + 1) values over fixed, whole-table bin edges
/// spanning the global [P1, P99] range. Counts are raw (unscaled).
struct ChannelHistogram {
  std::string channel;
  std::vector<double> bin_edges;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> global_counts;
  std::uint64_t clipped = 0;  // in-region cells outside [P1, P99]
  std::optional<double> region_mean;
  double global_mean = 0.0;
  friend bool operator==(const ChannelHistogram&, const ChannelHistogram&) = default;
};

struct RadialMean {
  std::string channel;
  std::optional<double> region_mean;  // absent for an empty region
  double global_mean = 0.0;
  friend bool operator==(const RadialMean&, const RadialMean&) = default;
};

enum class TypeOrder { kLocked, kByCount };
std::string_view to_string(TypeOrder order);
TypeOrder parse_type_order(std::string_view text);

using TypeCount = std::pair<std::string, std::uint64_t>;

struct RegionStats {
  std::vector<std::uint32_t> cell_ids;  // ascending
  std::size_t n_cells = 0;
  bool empty = true;
  std::vector<ChannelHistogram> histograms;
  std::vector<RadialMean> radial_means;
  std::vector<TypeCount> type_counts;
  double area_um2 = 0.0;
  friend bool operator==(const RegionStats&, const RegionStats&) = default;
};

/// One histogram per requested channel. Throws kLookup for unknown channels
/// and kDegenerate for channels without a usable global range.
std::vector<ChannelHistogram> region_histograms(const CellTable& table,
                                                std::span<const std::uint32_t> cell_ids,
                                                const std::vector<std::string>& channels);

/// Region and global means for every channel of the table.
std::vector<RadialMean> radial_means(const CellTable& table,
                                     std::span<const std::uint32_t> cell_ids);

/// kLocked lists every table type in first-seen order (zero counts kept);
/// kByCount lists the types present, descending count, ties alphabetical.
/// Untyped cells are not counted.
std::vector<TypeCount> type_counts(const CellTable& table,
                                   std::span<const std::uint32_t> cell_ids, TypeOrder order);

/// Cells whose log2(v + 1) value for `channel` lies in [lo, hi].
std::vector<std::uint32_t> brush_filter(const CellTable& table,
                                        std::span<const std::uint32_t> cell_ids,
                                        std::string_view channel, double lo, double hi);

/// Circle pi r^2, rectangle (2 half_w)(2 half_h), in square microns.
double region_area_um2(const LensGeometry& geometry, double pixel_size_um);

/// Everything a statistics lens shows for `geometry`.
RegionStats compute_region_stats(const CellTable& table, const CellIndex& index,
                                 const LensGeometry& geometry,
                                 const std::vector<std::string>& histogram_channels,
                                 TypeOrder order, double pixel_size_um);

}  // namespace tissuelens
