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

#include "tissuelens/geometry.hpp"

namespace tissuelens {

/// Ball-tree over 2D points with the Euclidean metric. Immutable after
/// construction; queries are const and safe to run concurrently.
///
/// Every node stores a bounding ball (centroid + covering radius). Range
/// queries prune balls that cannot touch the query shape, accept whole
/// balls that lie strictly inside it (with a relative safety margin), and
/// evaluate LensGeometry::contains on everything else, so the result is
/// always the same set a linear scan with that predicate would return.
class BallTree {
 public:
  static constexpr std::size_t kDefaultLeafSize = 32;

  BallTree() = default;
  explicit BallTree(std::span<const Point> points, std::size_t leaf_size = kDefaultLeafSize);

  /// Indices into the construction span, ascending.
  std::vector<std::uint32_t> query(const LensGeometry& region) const;

  std::size_t size() const { return order_.size(); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_size() const { return leaf_size_; }
  /// Every input index exactly once (for invariant checks).
  std::span<const std::uint32_t> permutation() const { return order_; }

 private:
  struct Node {
    Point center;
    double radius = 0.0;
    std::uint32_t begin = 0;  // range into order_
    std::uint32_t end = 0;
    std::int32_t left = -1;   // child node indices, -1 for leaves
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void collect(std::int32_t node, const LensGeometry& region,
               std::vector<std::uint32_t>& out) const;

  std::vector<Point> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_ = kDefaultLeafSize;
};

}  // namespace tissuelens
