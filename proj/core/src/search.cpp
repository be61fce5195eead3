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

#include "tissuelens/search.hpp"

#include <algorithm>
#include <cmath>

#include "tissuelens/error.hpp"
#include "tissuelens/quantize.hpp"

namespace tissuelens {

void SearchRequest::validate() const {
  if (channels.settings.empty()) {
    fail(ErrorKind::kInvalidArgument, "search needs at least one channel", "channels");
  }
  channels.validate();
  geometry.validate();
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    fail(ErrorKind::kInvalidArgument, "threshold must be in [0, 1]", "threshold");
  }
  if (bins < 2 || bins > kMaxSearchBins) {
    fail(ErrorKind::kInvalidArgument, "bins out of range", "bins");
  }
}

LensGeometry to_level_geometry(const LensGeometry& g, int level) {
  const double s = std::ldexp(1.0, -level);
  LensGeometry out = g;
  out.center = {g.center.x * s, g.center.y * s};
  out.radius = g.radius * s;
  out.half_w = g.half_w * s;
  out.half_h = g.half_h * s;
  return out;
}

SearchLens prepare_lens(const Dataset& dataset, const SearchRequest& request, int level) {
  request.validate();
  const auto dims = dataset.meta().level_dims(level);
  SearchLens lens;
  lens.level = level;
  lens.level_geometry = to_level_geometry(request.geometry, level);
  lens.window = search_window(lens.level_geometry);
  const auto& g = lens.level_geometry;
  RegionRect box{level,
                 std::max(0, static_cast<int>(std::floor(g.center.x - g.extent_x() - 1.0))),
                 std::max(0, static_cast<int>(std::floor(g.center.y - g.extent_y() - 1.0))),
                 std::min(dims.width, static_cast<int>(std::ceil(g.center.x + g.extent_x() + 1.0))),
                 std::min(dims.height, static_cast<int>(std::ceil(g.center.y + g.extent_y() + 1.0)))};
  if (box.x0 >= box.x1 || box.y0 >= box.y1) {
    fail(ErrorKind::kInvalidArgument, "lens does not intersect the image", "geometry");
  }
  LensGeometry local = g;
  local.center = {g.center.x - box.x0, g.center.y - box.y0};
  for (const auto& s : request.channels.settings) {
    const QuantizedPlane q = quantize(dataset.read_region(s.channel, box), s, request.bins);
    const Histogram h = lens_histogram(q, local);
    std::uint64_t total = 0;
    for (auto c : h) total += c;
    if (total == 0) {
      fail(ErrorKind::kInvalidArgument, "lens covers no pixel centers", "geometry");
    }
    lens.histograms.push_back(normalize(h));
  }
  return lens;
}

SimilarityMap region_similarity(const Dataset& dataset, const SearchRequest& request,
                                const SearchLens& lens, const RegionRect& rect) {
  dataset.check_region(rect);
  if (rect.level != lens.level) {
    fail(ErrorKind::kInvalidArgument, "region level differs from lens level", "level");
  }
  const auto dims = dataset.meta().level_dims(rect.level);
  const RegionRect ex{rect.level, std::max(0, rect.x0 - lens.window.half_x),
                      std::max(0, rect.y0 - lens.window.half_y),
                      std::min(dims.width, rect.x1 + lens.window.half_x),
                      std::min(dims.height, rect.y1 + lens.window.half_y)};
  std::vector<QuantizedPlane> planes;
  for (const auto& s : request.channels.settings) {
    planes.push_back(quantize(dataset.read_region(s.channel, ex), s, request.bins));
  }
  const SimilarityMap full = similarity_map_with(planes, lens.histograms, lens.window);
  const int ox = rect.x0 - ex.x0, oy = rect.y0 - ex.y0;
  SimilarityMap out;
  out.channels = full.channels;
  out.similarity = full.similarity.crop(ox, oy, ox + rect.width(), oy + rect.height());
  out.valid = full.valid.crop(ox, oy, ox + rect.width(), oy + rect.height());
  return out;
}

ContourSet search_viewport(const Dataset& dataset, const RegionRect& viewport,
                           const SearchRequest& request) {
  dataset.check_region(viewport);
  const SearchLens lens = prepare_lens(dataset, request, viewport.level);
  const SimilarityMap map = region_similarity(dataset, request, lens, viewport);
  ContourSet set = extract_contours(map, request.threshold);
  set.level = viewport.level;
  set.origin = {static_cast<double>(viewport.x0), static_cast<double>(viewport.y0)};
  return set.in_level0();
}

SimilarityMap whole_image_similarity(const Dataset& dataset, const SearchRequest& request,
                                     int tile_size) {
  if (tile_size < 0) fail(ErrorKind::kInvalidArgument, "negative tile size", "tile_size");
  const SearchLens lens = prepare_lens(dataset, request, 0);
  const auto dims = dataset.meta().level_dims(0);
  if (tile_size == 0) return region_similarity(dataset, request, lens, {0, 0, 0, dims.width, dims.height});

  SimilarityMap map;
  map.channels = static_cast<int>(request.channels.settings.size());
  map.similarity = PlaneF32(dims.width, dims.height, 0.0f);
  map.valid = Plane<std::uint8_t>(dims.width, dims.height, 0);
  for (int ty = 0; ty < dims.height; ty += tile_size) {
    for (int tx = 0; tx < dims.width; tx += tile_size) {
      const RegionRect r{0, tx, ty, std::min(dims.width, tx + tile_size),
                         std::min(dims.height, ty + tile_size)};
      const SimilarityMap part = region_similarity(dataset, request, lens, r);
      for (int y = 0; y < r.height(); ++y) {
        std::copy(part.similarity.row(y).begin(), part.similarity.row(y).end(),
                  map.similarity.row(r.y0 + y).begin() + r.x0);
        std::copy(part.valid.row(y).begin(), part.valid.row(y).end(),
                  map.valid.row(r.y0 + y).begin() + r.x0);
      }
    }
  }
  return map;
}

ContourSet search_whole_image(const Dataset& dataset, const SearchRequest& request,
                              int tile_size) {
  const SimilarityMap map = whole_image_similarity(dataset, request, tile_size);
  return extract_contours(map, request.threshold);
}

}  // namespace tissuelens
