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
#include <vector>

#include "tissuelens/quantize.hpp"

namespace tissuelens {

using Histogram = std::vector<std::uint64_t>;

/// Cumulative per-bin counts. Covers plane rows [row0, row1) and all columns;
/// at(x, y, b) counts bin-b pixels in [0, x) x [row0, row0 + y).
class IntegralHistogram {
 public:
  static IntegralHistogram build(const QuantizedPlane& q);
  static IntegralHistogram build_rows(const QuantizedPlane& q, int row0, int row1);

  int width() const { return width_; }
  int rows() const { return rows_; }
  int row0() const { return row0_; }
  int bins() const { return bins_; }

  std::uint32_t at(int x, int y, int b) const {
    return data_[(static_cast<std::size_t>(y) * (width_ + 1) + x) * bins_ + b];
  }
  const std::uint32_t* cell(int x, int y) const {
    return data_.data() + (static_cast<std::size_t>(y) * (width_ + 1) + x) * bins_;
  }

  /// Counts of the half-open plane rectangle [x0,x1) x [y0,y1), rows given in
  /// plane coordinates. No bounds checks.
  void window_counts(int x0, int y0, int x1, int y1, std::uint32_t* out) const {
    const std::uint32_t* a = cell(x1, y1 - row0_);
    const std::uint32_t* b = cell(x1, y0 - row0_);
    const std::uint32_t* c = cell(x0, y1 - row0_);
    const std::uint32_t* d = cell(x0, y0 - row0_);
    for (int i = 0; i < bins_; ++i) out[i] = a[i] - b[i] - c[i] + d[i];
  }

  /// Throws kBounds unless the rectangle lies within the covered rows.
  Histogram window_histogram(int x0, int y0, int x1, int y1) const;

  std::size_t memory_bytes() const { return data_.size() * sizeof(std::uint32_t); }

 private:
  int width_ = 0;
  int rows_ = 0;
  int row0_ = 0;
  int bins_ = 0;
  std::vector<std::uint32_t> data_;
};

inline IntegralHistogram build_integral(const QuantizedPlane& q) {
  return IntegralHistogram::build(q);
}

}  // namespace tissuelens
