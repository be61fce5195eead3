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

#include "tissuelens/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tissuelens/error.hpp"

namespace tissuelens {

Histogram lens_histogram(const QuantizedPlane& q, const LensGeometry& g) {
  Histogram h(q.bin_count, 0);
  const int x0 = std::max(0, static_cast<int>(std::floor(g.center.x - g.extent_x() - 1.0)));
  const int y0 = std::max(0, static_cast<int>(std::floor(g.center.y - g.extent_y() - 1.0)));
  const int x1 = static_cast<int>(std::min<double>(q.width(), std::ceil(g.center.x + g.extent_x() + 1.0)));
  const int y1 = static_cast<int>(std::min<double>(q.height(), std::ceil(g.center.y + g.extent_y() + 1.0)));
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (g.contains({x + 0.5, y + 0.5})) ++h[q.at(x, y)];
    }
  }
  return h;
}

std::vector<double> normalize(const Histogram& h) {
  std::uint64_t total = 0;
  for (auto c : h) total += c;
  if (total == 0) fail(ErrorKind::kInvalidArgument, "histogram has no mass", "histogram");
  std::vector<double> out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    out[i] = static_cast<double>(h[i]) / static_cast<double>(total);
  }
  return out;
}

double chi_square(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    fail(ErrorKind::kInvalidArgument, "histograms differ in bin count", "bins");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = x[i] + y[i];
    if (s == 0.0) continue;
    const double diff = x[i] - y[i];
    d += diff * diff / s;
  }
  return d;
}

SearchWindow search_window(const LensGeometry& g) {
  return {static_cast<int>(std::lround(g.extent_x())),
          static_cast<int>(std::lround(g.extent_y()))};
}

SimilarityMap similarity_map_with(std::span<const QuantizedPlane> planes,
                                  std::span<const std::vector<double>> lens,
                                  SearchWindow window) {
  if (planes.empty()) fail(ErrorKind::kInvalidArgument, "no channels to search", "channels");
  if (lens.size() != planes.size()) {
    fail(ErrorKind::kInvalidArgument, "one lens histogram per channel required", "lens");
  }
  const int w = planes[0].width();
  const int h = planes[0].height();
  for (std::size_t c = 0; c < planes.size(); ++c) {
    if (planes[c].width() != w || planes[c].height() != h) {
      fail(ErrorKind::kInvalidArgument,
           "channel '" + planes[c].channel + "' differs in dimensions", "planes");
    }
    if (lens[c].size() != static_cast<std::size_t>(planes[c].bin_count)) {
      fail(ErrorKind::kInvalidArgument, "lens histogram bin count mismatch", "lens");
    }
  }
  if (window.half_x < 0 || window.half_y < 0) {
    fail(ErrorKind::kInvalidArgument, "negative search window", "window");
  }

  SimilarityMap map;
  map.channels = static_cast<int>(planes.size());
  map.similarity = PlaneF32(w, h, 0.0f);
  map.valid = Plane<std::uint8_t>(w, h, 0);

  const int hx = window.half_x;
  const int hy = window.half_y;
  // Valid centers: hx <= x < w - hx, hy <= y < h - hy.
  const int vx0 = hx, vx1 = w - hx;
  const int vy0 = hy, vy1 = h - hy;
  if (vx0 >= vx1 || vy0 >= vy1) return map;

  const double area = static_cast<double>(window.width()) * window.height();
  const double inv_area = 1.0 / area;
  const double inv_channels = 1.0 / static_cast<double>(planes.size());

  int max_bins = 0;
  for (const auto& q : planes) max_bins = std::max(max_bins, q.bin_count);
  const std::size_t row_bytes = static_cast<std::size_t>(w + 1) * max_bins * sizeof(std::uint32_t);
  const int budget_rows = static_cast<int>(std::max<std::size_t>(1, kIntegralBudgetBytes / row_bytes));
  const int band = std::max(16, budget_rows - window.height());

  std::vector<double> dist(static_cast<std::size_t>(vx1 - vx0));
  std::vector<std::uint32_t> counts(max_bins);

  for (int by0 = vy0; by0 < vy1; by0 += band) {
    const int by1 = std::min(vy1, by0 + band);
    // Output rows [by0, by1) need plane rows [by0 - hy, by1 + hy).
    std::vector<std::vector<double>> band_dist(
        static_cast<std::size_t>(by1 - by0), std::vector<double>(dist.size(), 0.0));
    for (std::size_t c = 0; c < planes.size(); ++c) {
      const auto& q = planes[c];
      const int nb = q.bin_count;
      const auto ih = IntegralHistogram::build_rows(q, by0 - hy, by1 + hy);
      const double* y = lens[c].data();
      for (int py = by0; py < by1; ++py) {
        auto& row = band_dist[static_cast<std::size_t>(py - by0)];
        for (int px = vx0; px < vx1; ++px) {
          ih.window_counts(px - hx, py - hy, px + hx + 1, py + hy + 1, counts.data());
          double d = 0.0;
          for (int b = 0; b < nb; ++b) {
            const double xb = counts[b] * inv_area;
            const double s = xb + y[b];
            if (s == 0.0) continue;
            const double diff = xb - y[b];
            d += diff * diff / s;
          }
          row[static_cast<std::size_t>(px - vx0)] += d;
        }
      }
    }
    for (int py = by0; py < by1; ++py) {
      const auto& row = band_dist[static_cast<std::size_t>(py - by0)];
      for (int px = vx0; px < vx1; ++px) {
        const double d = row[static_cast<std::size_t>(px - vx0)] * inv_channels;
        const double s = std::clamp(1.0 - d / 2.0, 0.0, 1.0);
        map.similarity.at(px, py) = static_cast<float>(s);
        map.valid.at(px, py) = 1;
      }
    }
  }
  return map;
}

SimilarityMap similarity_map(std::span<const QuantizedPlane> planes,
                             const LensGeometry& geometry) {
  if (planes.empty()) fail(ErrorKind::kInvalidArgument, "no channels to search", "channels");
  geometry.validate();
  std::vector<std::vector<double>> lens;
  for (const auto& q : planes) {
    const Histogram h = lens_histogram(q, geometry);
    std::uint64_t total = 0;
    for (auto c : h) total += c;
    if (total == 0) {
      fail(ErrorKind::kInvalidArgument, "lens covers no pixels of the plane", "geometry");
    }
    lens.push_back(normalize(h));
  }
  return similarity_map_with(planes, lens, search_window(geometry));
}

}  // namespace tissuelens
