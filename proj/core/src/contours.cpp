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

#include "tissuelens/contours.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "tissuelens/error.hpp"

namespace tissuelens {

double signed_area(const Ring& ring) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    a += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
  }
  return a / 2.0;
}

bool ring_contains(const Ring& ring, Point p) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

bool ContourPolygon::contains(Point p) const {
  if (!ring_contains(outer, p)) return false;
  for (const auto& h : holes) {
    if (ring_contains(h, p)) return false;
  }
  return true;
}

Point ContourSet::to_level0(Point p) const {
  const double s = std::ldexp(1.0, level);
  return {(origin.x + p.x) * s, (origin.y + p.y) * s};
}

ContourSet ContourSet::in_level0() const {
  ContourSet out = *this;
  const double s = std::ldexp(1.0, level);
  auto map_ring = [&](Ring& r) {
    for (auto& p : r) p = to_level0(p);
  };
  for (auto& poly : out.polygons) {
    map_ring(poly.outer);
    for (auto& h : poly.holes) map_ring(h);
    poly.area_px2 *= s * s;
  }
  out.level = 0;
  out.origin = {0.0, 0.0};
  return out;
}

bool ContourSet::covers_level0(Point p) const {
  const double s = std::ldexp(1.0, level);
  const Point local{p.x / s - origin.x, p.y / s - origin.y};
  return std::any_of(polygons.begin(), polygons.end(),
                     [&](const ContourPolygon& poly) { return poly.contains(local); });
}

double ContourSet::total_area_px2() const {
  double a = 0.0;
  for (const auto& p : polygons) a += p.area_px2;
  return a;
}

namespace {

// Padded node grid: node (i, j) is map pixel (i - 1, j - 1), located at
// (i - 0.5, j - 0.5). The outer ring is padding.
class NodeGrid {
 public:
  NodeGrid(const SimilarityMap& map, double t) : map_(map), t_(t) {
    nw_ = map.width() + 2;
    nh_ = map.height() + 2;
  }
  int nw() const { return nw_; }
  int nh() const { return nh_; }
  double value(int i, int j) const {
    const int x = i - 1, y = j - 1;
    if (x < 0 || y < 0 || x >= map_.width() || y >= map_.height()) return t_ - 1.0;
    if (!map_.is_valid(x, y)) return t_ - 1.0;
    return map_.similarity.at(x, y);
  }
  bool inside(int i, int j) const { return value(i, j) >= t_; }
  Point position(int i, int j) const { return {i - 0.5, j - 0.5}; }

  // Horizontal edge (i,j)-(i+1,j) is 2*k, vertical edge (i,j)-(i,j+1) is 2*k+1.
  std::int64_t h_edge(int i, int j) const { return 2 * (static_cast<std::int64_t>(j) * nw_ + i); }
  std::int64_t v_edge(int i, int j) const { return h_edge(i, j) + 1; }

  Point crossing(std::int64_t edge) const {
    const std::int64_t k = edge / 2;
    const int i = static_cast<int>(k % nw_);
    const int j = static_cast<int>(k / nw_);
    const int i2 = (edge % 2 == 0) ? i + 1 : i;
    const int j2 = (edge % 2 == 0) ? j : j + 1;
    const double v0 = value(i, j);
    const double v1 = value(i2, j2);
    const double f = (t_ - v0) / (v1 - v0);
    const Point p0 = position(i, j);
    const Point p1 = position(i2, j2);
    return {p0.x + f * (p1.x - p0.x), p0.y + f * (p1.y - p0.y)};
  }

 private:
  const SimilarityMap& map_;
  double t_;
  int nw_ = 0;
  int nh_ = 0;
};

}  // namespace

ContourSet extract_contours(const SimilarityMap& map, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    fail(ErrorKind::kInvalidArgument, "threshold must be in [0, 1]", "threshold");
  }
  ContourSet out;
  out.threshold = threshold;
  if (map.width() == 0 || map.height() == 0) return out;

  const NodeGrid grid(map, threshold);
  // Segment start edge -> end edge; starts are unique.
  std::unordered_map<std::int64_t, std::int64_t> next;
  std::vector<std::int64_t> order;

  for (int j = 0; j + 1 < grid.nh(); ++j) {
    for (int i = 0; i + 1 < grid.nw(); ++i) {
      // Corners clockwise: TL, TR, BR, BL.
      const bool in[4] = {grid.inside(i, j), grid.inside(i + 1, j), grid.inside(i + 1, j + 1),
                          grid.inside(i, j + 1)};
      const int n_in = in[0] + in[1] + in[2] + in[3];
      if (n_in == 0 || n_in == 4) continue;
      const std::int64_t edges[4] = {grid.h_edge(i, j), grid.v_edge(i + 1, j),
                                     grid.h_edge(i, j + 1), grid.v_edge(i, j)};
      // Crossing kinds along the clockwise walk: +1 in->out, -1 out->in.
      int kind[4];
      for (int e = 0; e < 4; ++e) {
        const bool a = in[e], b = in[(e + 1) % 4];
        kind[e] = a == b ? 0 : (a ? 1 : -1);
      }
      bool pair_out_corners = true;
      if (n_in == 2 && in[0] == in[2]) {
        const double mean = (grid.value(i, j) + grid.value(i + 1, j) +
                             grid.value(i + 1, j + 1) + grid.value(i, j + 1)) / 4.0;
        pair_out_corners = mean >= threshold;
      }
      for (int e = 0; e < 4; ++e) {
        if (kind[e] != 1) continue;
        int partner = -1;
        if (pair_out_corners) {
          for (int s = 1; s < 4; ++s) {
            const int f = (e + s) % 4;
            if (kind[f] == -1) { partner = f; break; }
          }
        } else {
          for (int s = 1; s < 4; ++s) {
            const int f = (e + 4 - s) % 4;
            if (kind[f] == -1) { partner = f; break; }
          }
        }
        next.emplace(edges[e], edges[partner]);
        order.push_back(edges[e]);
      }
    }
  }

  std::vector<Ring> outers, holes;
  std::unordered_map<std::int64_t, bool> used;
  used.reserve(order.size());
  for (auto start : order) {
    if (used.count(start)) continue;
    Ring ring;
    std::int64_t e = start;
    do {
      used.emplace(e, true);
      ring.push_back(grid.crossing(e));
      auto it = next.find(e);
      if (it == next.end()) {
        fail(ErrorKind::kIntegrity, "open contour during stitching", "contours");
      }
      e = it->second;
    } while (e != start);
    ring.push_back(ring.front());
    const double a = signed_area(ring);
    if (a > 0) outers.push_back(std::move(ring));
    else if (a < 0) holes.push_back(std::move(ring));
  }

  for (auto& o : outers) {
    ContourPolygon poly;
    poly.area_px2 = signed_area(o);
    poly.outer = std::move(o);
    out.polygons.push_back(std::move(poly));
  }
  // Each hole belongs to the smallest outer ring that contains it.
  for (auto& h : holes) {
    int best = -1;
    for (std::size_t k = 0; k < out.polygons.size(); ++k) {
      if (!ring_contains(out.polygons[k].outer, h.front())) continue;
      if (best < 0 || signed_area(out.polygons[k].outer) <
                          signed_area(out.polygons[static_cast<std::size_t>(best)].outer)) {
        best = static_cast<int>(k);
      }
    }
    if (best < 0) continue;
    auto& poly = out.polygons[static_cast<std::size_t>(best)];
    poly.area_px2 += signed_area(h);
    poly.holes.push_back(std::move(h));
  }
  return out;
}

}  // namespace tissuelens
