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

#include "tissuelens/ball_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tissuelens {

namespace {

constexpr double kMargin = 1e-9;

/// Distance from point `c` to the closed axis-aligned rectangle.
double distance_to_rect(Point c, const LensGeometry& r) {
  const double dx = std::max(0.0, std::abs(c.x - r.center.x) - r.half_w);
  const double dy = std::max(0.0, std::abs(c.y - r.center.y) - r.half_h);
  return std::hypot(dx, dy);
}

}  // namespace

BallTree::BallTree(std::span<const Point> points, std::size_t leaf_size)
    : points_(points.begin(), points.end()), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) {
    nodes_.reserve(2 * (points_.size() / leaf_size_ + 1));
    build(0, static_cast<std::uint32_t>(points_.size()));
  }
}

std::int32_t BallTree::build(std::uint32_t begin, std::uint32_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  double sx = 0.0, sy = 0.0;
  double minx = INFINITY, maxx = -INFINITY, miny = INFINITY, maxy = -INFINITY;
  for (std::uint32_t i = begin; i < end; ++i) {
    const Point& p = points_[order_[i]];
    sx += p.x;
    sy += p.y;
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double n = end - begin;
  node.center = {sx / n, sy / n};
  for (std::uint32_t i = begin; i < end; ++i) {
    const Point& p = points_[order_[i]];
    node.radius = std::max(node.radius, std::hypot(p.x - node.center.x, p.y - node.center.y));
  }
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= leaf_size_) return id;

  const bool split_x = (maxx - minx) >= (maxy - miny);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const Point& pa = points_[a];
                     const Point& pb = points_[b];
                     return split_x ? (pa.x < pb.x || (pa.x == pb.x && a < b))
                                    : (pa.y < pb.y || (pa.y == pb.y && a < b));
                   });
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

void BallTree::collect(std::int32_t index, const LensGeometry& region,
                       std::vector<std::uint32_t>& out) const {
  const Node& node = nodes_[static_cast<std::size_t>(index)];
  const double scale = 1.0 + std::abs(node.center.x) + std::abs(node.center.y) + node.radius +
                       region.extent_x() + region.extent_y();
  const double slack = kMargin * scale;

  bool inside = false;
  if (region.shape == LensShape::kCircle) {
    const double d = std::hypot(node.center.x - region.center.x, node.center.y - region.center.y);
    if (d - node.radius > region.radius + slack) return;
    inside = d + node.radius < region.radius - slack;
  } else {
    if (distance_to_rect(node.center, region) > node.radius + slack) return;
    inside = std::abs(node.center.x - region.center.x) + node.radius < region.half_w - slack &&
             std::abs(node.center.y - region.center.y) + node.radius < region.half_h - slack;
  }
  if (inside) {
    out.insert(out.end(), order_.begin() + node.begin, order_.begin() + node.end);
    return;
  }
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      if (region.contains(points_[order_[i]])) out.push_back(order_[i]);
    }
    return;
  }
  collect(node.left, region, out);
  collect(node.right, region, out);
}

std::vector<std::uint32_t> BallTree::query(const LensGeometry& region) const {
  std::vector<std::uint32_t> out;
  if (nodes_.empty()) return out;
  collect(0, region, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tissuelens
