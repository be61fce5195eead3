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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tissuelens {

/// Dense row-major 2D raster. Owns its pixels.
template <typename T>
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Plane() = default;
  Plane(int w, int h, T fill = T{})
      : width(w), height(h),
        data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  T& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  const T& at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::span<T> row(int y) {
    return {data.data() + static_cast<std::size_t>(y) * width,
            static_cast<std::size_t>(width)};
  }
  std::span<const T> row(int y) const {
    return {data.data() + static_cast<std::size_t>(y) * width,
            static_cast<std::size_t>(width)};
  }
  bool empty() const { return width == 0 || height == 0; }
  std::size_t size() const { return data.size(); }

  /// Copy of the half-open rectangle [x0,x1) x [y0,y1). Caller checks bounds.
  Plane crop(int x0, int y0, int x1, int y1) const {
    Plane out(x1 - x0, y1 - y0);
    for (int y = y0; y < y1; ++y) {
      auto src = row(y).subspan(static_cast<std::size_t>(x0),
                                static_cast<std::size_t>(x1 - x0));
      std::copy(src.begin(), src.end(), out.row(y - y0).begin());
    }
    return out;
  }

  friend bool operator==(const Plane&, const Plane&) = default;
};

using PlaneU16 = Plane<std::uint16_t>;
using PlaneU32 = Plane<std::uint32_t>;
using PlaneF32 = Plane<float>;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 0;
  friend bool operator==(const Rgba&, const Rgba&) = default;
};

using RgbPlane = Plane<Rgb>;
using RgbaPlane = Plane<Rgba>;

}  // namespace tissuelens
