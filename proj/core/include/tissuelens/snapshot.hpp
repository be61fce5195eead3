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
#include <string>
#include <vector>

#include "tissuelens/color.hpp"
#include "tissuelens/contours.hpp"
#include "tissuelens/dataset.hpp"
#include "tissuelens/lens.hpp"
#include "tissuelens/region_stats.hpp"
#include "tissuelens/workspace.hpp"

namespace tissuelens {

constexpr int kThumbnailMaxEdge = 256;

/// Everything needed to put the view back: viewport, context channels, lens
/// and the statistics configuration.
struct CaptureState {
  RegionRect viewport;
  ChannelSet context_channel_set;
  LensState lens;
  std::vector<std::string> stats_channels;
  TypeOrder type_order = TypeOrder::kLocked;

  /// Viewport center in level-0 pixels.
  Point view_center() const;
  /// Screen pixels per level-0 pixel.
  double zoom() const;
  friend bool operator==(const CaptureState&, const CaptureState&) = default;
};

struct RichSnapshot {
  std::string id;
  std::string title;
  std::string description;
  std::string created_at;  // ISO-8601 UTC
  std::string dataset_meta_hash;
  CaptureState state;
  std::vector<std::uint32_t> cell_ids;  // ascending
  RegionStats stats;
  std::vector<std::uint8_t> thumbnail_png;
  /// Produced by extend_search; never persisted in that state.
  bool provisional = false;

  const LensGeometry& geometry() const { return state.lens.geometry; }
  friend bool operator==(const RichSnapshot&, const RichSnapshot&) = default;
};

/// 16 hex digits of milliseconds since the epoch, '-', 8 random hex digits.
std::string make_snapshot_id(std::uint64_t epoch_ms, std::uint32_t random_suffix);
std::string new_snapshot_id();
std::string format_utc_timestamp(std::uint64_t epoch_ms);

/// Lens region of the full render (context plus lens), cropped to the lens
/// bounding box on screen and scaled down to at most kThumbnailMaxEdge.
RgbaPlane render_thumbnail(const Workspace& ws, const CaptureState& state);

/// Throws kInvalidArgument when the lens misses the viewport.
RichSnapshot create_snapshot(const Workspace& ws, const CaptureState& state,
                             std::string title, std::string description);

/// State delta for the open dataset. Missing channels raise kLookup naming the
/// channel; with `trust_stats`, a different dataset identity raises kConflict.
CaptureState restore(const RichSnapshot& snapshot, const Workspace& ws, bool trust_stats = false);

struct ExtendResult {
  ContourSet contours;  // level-0 coordinates
  std::vector<RichSnapshot> provisional;
};

/// Whole-image search with the snapshot's lens; one provisional snapshot per
/// contour, centered on the contour's area centroid.
ExtendResult extend_search(const Workspace& ws, const RichSnapshot& snapshot, double threshold,
                           int tile_size = 512);

/// Area centroid of a polygon's outer ring.
Point ring_centroid(const Ring& ring);

/// Case-insensitive substring match on title and description, order kept.
std::vector<RichSnapshot> filter_snapshots(const std::vector<RichSnapshot>& snapshots,
                                           std::string_view query);

}  // namespace tissuelens
