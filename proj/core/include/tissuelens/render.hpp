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
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "tissuelens/color.hpp"
#include "tissuelens/dataset.hpp"
#include "tissuelens/lens.hpp"
#include "tissuelens/plane.hpp"

namespace tissuelens {

struct TypePalette {
  std::map<std::string, Rgb> colors;
  Rgb fallback{128, 128, 128};

  Rgb color_for(const std::string* type) const;
  /// Deterministic palette for a list of type labels.
  static TypePalette for_types(const std::vector<std::string>& types);
};

using CellTypeMap = std::unordered_map<std::uint32_t, std::string>;

/// Opaque type-colored pixels on cell boundaries, transparent elsewhere. A
/// labelled pixel is on the boundary when a 4-neighbour inside the region
/// carries a different ID (including background). Cells missing from
/// `cell_types`, or with a type missing from the palette, use the fallback.
RgbaPlane render_cell_boundaries(const PlaneU32& mask, const CellTypeMap& cell_types,
                                 const TypePalette& palette);

/// Optional inputs for cell-type lenses.
struct CellOverlay {
  const CellTypeMap* cell_types = nullptr;
  TypePalette palette;
};

/// Screen pixel (x, y) of a viewport at `level` shows level-0 point
/// ((x + 0.5) * 2^level, (y + 0.5) * 2^level).
Point level_pixel_center(int level, int x, int y);

/// Channel-based render of a region: composite of `set`, fully opaque. An
/// empty set renders black.
RgbaPlane render_context(const Dataset& dataset, const RegionRect& viewport,
                         const ChannelSet& set);

/// Patch positioned relative to the viewport origin; may extend past the
/// viewport. Transparent pixels are outside the lens or the image.
struct LensPatch {
  int x0 = 0;
  int y0 = 0;
  RgbaPlane pixels;

  int x1() const { return x0 + pixels.width; }
  int y1() const { return y0 + pixels.height; }
};

/// Pyramid level used to sample lens content: the coarsest level whose
/// scale is at least the viewport scale times the magnification.
int lens_source_level(int viewport_level, double magnification);

/// Renders the lens over a viewport: every screen pixel inside the lens is
/// mapped through lens_source_coord, sampled (nearest) from the source
/// level, composited with `channel_set` and alpha-blended with the context
/// render at that pixel.
LensPatch render_lens(const Dataset& dataset, const RegionRect& viewport,
                      const ChannelSet& context, const LensState& lens,
                      const CellOverlay* overlay = nullptr);

/// Same as render_lens but composites `channel_set` instead of the lens set.
LensPatch render_lens_with(const Dataset& dataset, const RegionRect& viewport,
                           const ChannelSet& context, const LensState& lens,
                           const ChannelSet& channel_set, const CellOverlay* overlay);

struct SplitScreen {
  LensPatch lens;     // lens channel set
  LensPatch context;  // same source samples in the context channel set
};

/// Juxtaposes a second lens: B shows the lens' source region with the
/// context set, placed beside A (right if it fits the viewport, else left)
/// with a 4 px gap, never overlapping A.
SplitScreen split_screen(const Dataset& dataset, const RegionRect& viewport,
                         const ChannelSet& context, const LensState& lens);

/// Context plus optional lens (and the split-screen partner in that mode).
RgbaPlane render_viewport(const Dataset& dataset, const RegionRect& viewport,
                          const ChannelSet& context, const std::optional<LensState>& lens,
                          const CellOverlay* overlay = nullptr);

/// Overlays opaque patch pixels onto `target` (clipped).
void paste_patch(RgbaPlane& target, const LensPatch& patch);

}  // namespace tissuelens
