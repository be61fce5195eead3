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

#include "tissuelens/integral_histogram.hpp"

#include <string>

#include "tissuelens/error.hpp"

namespace tissuelens {

IntegralHistogram IntegralHistogram::build(const QuantizedPlane& q) {
  return build_rows(q, 0, q.height());
}

IntegralHistogram IntegralHistogram::build_rows(const QuantizedPlane& q, int row0, int row1) {
  if (q.width() <= 0 || q.height() <= 0) {
    fail(ErrorKind::kInvalidArgument, "integral histogram of an empty plane", "plane");
  }
  if (row0 < 0 || row1 > q.height() || row0 >= row1) {
    fail(ErrorKind::kBounds, "integral histogram row range out of bounds", "rows");
  }
  IntegralHistogram ih;
  ih.width_ = q.width();
  ih.rows_ = row1 - row0;
  ih.row0_ = row0;
  ih.bins_ = q.bin_count;
  const std::size_t stride = static_cast<std::size_t>(ih.width_ + 1) * ih.bins_;
  ih.data_.assign(stride * (ih.rows_ + 1), 0);
  std::vector<std::uint32_t> running(ih.bins_);
  for (int y = 1; y <= ih.rows_; ++y) {
    std::fill(running.begin(), running.end(), 0);
    const auto src = q.bins.row(row0 + y - 1);
    std::uint32_t* above = ih.data_.data() + stride * (y - 1);
    std::uint32_t* cur = ih.data_.data() + stride * y;
    for (int x = 1; x <= ih.width_; ++x) {
      ++running[src[x - 1]];
      const std::uint32_t* up = above + static_cast<std::size_t>(x) * ih.bins_;
      std::uint32_t* out = cur + static_cast<std::size_t>(x) * ih.bins_;
      for (int b = 0; b < ih.bins_; ++b) out[b] = up[b] + running[b];
    }
  }
  return ih;
}

Histogram IntegralHistogram::window_histogram(int x0, int y0, int x1, int y1) const {
  if (x0 < 0 || y0 < row0_ || x1 > width_ || y1 > row0_ + rows_ || x0 > x1 || y0 > y1) {
    fail(ErrorKind::kBounds,
         "window [" + std::to_string(x0) + "," + std::to_string(x1) + ")x[" +
             std::to_string(y0) + "," + std::to_string(y1) + ") outside integral histogram",
         "rect");
  }
  std::vector<std::uint32_t> tmp(bins_);
  window_counts(x0, y0, x1, y1, tmp.data());
  return Histogram(tmp.begin(), tmp.end());
}

}  // namespace tissuelens
