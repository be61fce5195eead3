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
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

#include "tissuelens/plane.hpp"

namespace tissuelens {

struct TileKey {
  int level = 0;
  int tx = 0;
  int ty = 0;
  friend bool operator==(const TileKey&, const TileKey&) = default;
};

struct TileKeyHash {
  std::size_t operator()(const TileKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(k.level);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(k.tx);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(k.ty);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct CacheStats {
  std::size_t capacity = 0;
  std::size_t resident = 0;
  std::size_t peak_resident = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
};

/// Thread-safe LRU cache of decoded tiles for one channel (or the mask).
/// Loading happens outside the lock; two threads missing on the same key may
/// both load it, the second insert wins and the result is identical.
template <typename T>
class TileCache {
 public:
  using TilePtr = std::shared_ptr<const Plane<T>>;

  explicit TileCache(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

  TilePtr get(const TileKey& key, const std::function<Plane<T>()>& load) {
    {
      std::lock_guard lock(mu_);
      if (auto it = index_.find(key); it != index_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second);
        ++hits_;
        return it->second->second;
      }
      ++misses_;
    }
    auto tile = std::make_shared<const Plane<T>>(load());
    std::lock_guard lock(mu_);
    if (auto it = index_.find(key); it != index_.end()) {
      it->second->second = tile;
      lru_.splice(lru_.begin(), lru_, it->second);
      return tile;
    }
    lru_.emplace_front(key, tile);
    index_[key] = lru_.begin();
    while (lru_.size() > capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    peak_ = std::max(peak_, lru_.size());
    return tile;
  }

  CacheStats stats() const {
    std::lock_guard lock(mu_);
    return {capacity_, lru_.size(), peak_, hits_, misses_};
  }

 private:
  using Entry = std::pair<TileKey, TilePtr>;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> lru_;
  std::unordered_map<TileKey, typename std::list<Entry>::iterator, TileKeyHash> index_;
  std::size_t peak_ = 0;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

}  // namespace tissuelens
