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

#include <vector>

#include "tissuelens/color.hpp"
#include "tissuelens/contours.hpp"
#include "tissuelens/dataset.hpp"
#include "tissuelens/geometry.hpp"
#include "tissuelens/similarity.hpp"

namespace tissuelens {

constexpr double kDefaultSearchThreshold = 0.8;
constexpr int kDefaultSearchTile = 512;

struct SearchRequest {
  /// Channels to compare; each setting's range drives quantization.
  ChannelSet channels;
  LensGeometry geometry;  // level-0 coordinates
  double threshold = kDefaultSearchThreshold;
  int bins = kDefaultSearchBins;

  /// Non-empty channel set, valid geometry, threshold in [0, 1].
  void validate() const;
};

/// Lens histograms and window for one pyramid level.
struct SearchLens {
  int level = 0;
  LensGeometry level_geometry;
  SearchWindow window;
  std::vector<std::vector<double>> histograms;  // unit mass, one per channel
};

LensGeometry to_level_geometry(const LensGeometry& level0, int level);

/// Throws kLookup for unknown channels and kInvalidArgument when the lens
/// covers no pixel of the level.
SearchLens prepare_lens(const Dataset& dataset, const SearchRequest& request, int level);

/// Similarity over `rect` (at lens.level). Windows may extend past the rect
/// but not past the image.
SimilarityMap region_similarity(const Dataset& dataset, const SearchRequest& request,
                                const SearchLens& lens, const RegionRect& rect);

/// Search on the viewport's own pyramid level; contours in level-0 coordinates.
ContourSet search_viewport(const Dataset& dataset, const RegionRect& viewport,
                           const SearchRequest& request);

/// Full-resolution map assembled from tiles of `tile_size` (0 = one pass).
SimilarityMap whole_image_similarity(const Dataset& dataset, const SearchRequest& request,
                                     int tile_size = kDefaultSearchTile);

ContourSet search_whole_image(const Dataset& dataset, const SearchRequest& request,
                              int tile_size = kDefaultSearchTile);

}  // namespace tissuelens
