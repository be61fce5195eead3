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

#include <cmath>
#include <string_view>

namespace tissuelens {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

enum class LensShape { kCircle, kRectangle };

std::string_view to_string(LensShape shape);
LensShape parse_lens_shape(std::string_view text);

/// Lens outline in level-0 pixel coordinates. Circles use `radius`,
/// rectangles use `half_w` / `half_h`.
struct LensGeometry {
  LensShape shape = LensShape::kCircle;
  Point center;
  double radius = 0.0;
  double half_w = 0.0;
  double half_h = 0.0;

  static LensGeometry circle(double cx, double cy, double r) {
    return {LensShape::kCircle, {cx, cy}, r, 0.0, 0.0};
  }
  static LensGeometry rect(double cx, double cy, double hw, double hh) {
    return {LensShape::kRectangle, {cx, cy}, 0.0, hw, hh};
  }

  /// Closed membership test (boundary points are inside).
  bool contains(Point p) const {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    if (shape == LensShape::kCircle) return dx * dx + dy * dy <= radius * radius;
    return std::abs(dx) <= half_w && std::abs(dy) <= half_h;
  }
  double extent_x() const { return shape == LensShape::kCircle ? radius : half_w; }
  double extent_y() const { return shape == LensShape::kCircle ? radius : half_h; }

  /// Throws kInvalidArgument when the extent is not strictly positive.
  /// Zero radius is accepted for queries via `allow_zero`.
  void validate(bool allow_zero = false) const;

  friend bool operator==(const LensGeometry&, const LensGeometry&) = default;
};

}  // namespace tissuelens
