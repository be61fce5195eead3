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
#include <span>
#include <vector>

#include "tissuelens/geometry.hpp"
#include "tissuelens/integral_histogram.hpp"
#include "tissuelens/quantize.hpp"

namespace tissuelens {

/// Exact histogram of the pixels whose centers (x + 0.5, y + 0.5) fall inside
/// `geometry`, which is given in the plane's pixel coordinates.
Histogram lens_histogram(const QuantizedPlane& q, const LensGeometry& geometry);

/// Unit-mass copy. Throws kInvalidArgument for an all-zero histogram.
std::vector<double> normalize(const Histogram& h);

/// Sum of (x - y)^2 / (x + y) over bins with x + y > 0.
double chi_square(std::span<const double> x, std::span<const double> y);

/// Half extents of the per-pixel window: the lens' bounding square, rounded.
struct SearchWindow {
  int half_x = 0;
  int half_y = 0;
  int width() const { return 2 * half_x + 1; }
  int height() const { return 2 * half_y + 1; }
};

SearchWindow search_window(const LensGeometry& geometry);

struct SimilarityMap {
  PlaneF32 similarity;         // in [0, 1]; 0 where invalid
  Plane<std::uint8_t> valid;   // 0 where the window leaves the plane
  int channels = 0;

  int width() const { return similarity.width; }
  int height() const { return similarity.height; }
  bool is_valid(int x, int y) const { return valid.at(x, y) != 0; }
  friend bool operator==(const SimilarityMap&, const SimilarityMap&) = default;
};

/// Chi-square mean over channels, mapped to 1 - d/2 and clamped. Each entry of
/// `lens` is the unit-mass lens histogram of the matching plane.
SimilarityMap similarity_map_with(std::span<const QuantizedPlane> planes,
                                  std::span<const std::vector<double>> lens,
                                  SearchWindow window);

/// Lens histograms are taken from the planes themselves.
SimilarityMap similarity_map(std::span<const QuantizedPlane> planes,
                             const LensGeometry& geometry);

/// Upper bound on the memory of one banded integral histogram.
constexpr std::size_t kIntegralBudgetBytes = std::size_t{64} << 20;

}  // namespace tissuelens
