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

#include "tissuelens/geometry.hpp"
#include "tissuelens/similarity.hpp"

namespace tissuelens {

/// Closed ring (first vertex repeated at the end).
using Ring = std::vector<Point>;

/// Shoelace area. Positive for clockwise rings in y-down image coordinates.
double signed_area(const Ring& ring);

/// Even-odd point-in-ring test.
bool ring_contains(const Ring& ring, Point p);

struct ContourPolygon {
  Ring outer;               // positive signed area
  std::vector<Ring> holes;  // negative signed area
  double area_px2 = 0.0;    // outer minus holes, in map pixels

  bool contains(Point p) const;
  friend bool operator==(const ContourPolygon&, const ContourPolygon&) = default;
};

/// Polygons in the map's continuous pixel coordinates, where pixel (x, y) has
/// its center at (x + 0.5, y + 0.5). The map's pixel (0, 0) corner sits at
/// `origin` in pyramid level `level`.
struct ContourSet {
  std::vector<ContourPolygon> polygons;
  double threshold = 0.0;
  int level = 0;
  Point origin;

  Point to_level0(Point p) const;
  /// Copy with every vertex mapped to level-0 coordinates.
  ContourSet in_level0() const;
  /// Whether any polygon covers a level-0 point.
  bool covers_level0(Point p) const;
  double total_area_px2() const;
  friend bool operator==(const ContourSet&, const ContourSet&) = default;
};

/// Marching squares at iso-level t over map nodes at pixel centers. Nodes
/// with value >= t are inside; invalid pixels and the padding ring count as
/// outside. Saddles are resolved by the mean of the four corners.
ContourSet extract_contours(const SimilarityMap& map, double threshold);

}  // namespace tissuelens
