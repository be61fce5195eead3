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
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "tissuelens/dataset_meta.hpp"
#include "tissuelens/plane.hpp"

namespace tissuelens {

/// Mean of up to four samples, rounded half-up.
std::uint16_t block_mean(std::span<const std::uint16_t> samples);

/// Majority non-zero label of a block; ties go to the smallest ID and an
/// all-background block yields 0. The result always occurs in `labels`.
std::uint32_t block_majority_label(std::span<const std::uint32_t> labels);

/// Next pyramid level: each output pixel covers the 2x2 block at (2x, 2y);
/// pixels beyond an odd edge are excluded from the block.
PlaneU16 downsample_mean(const PlaneU16& plane);
PlaneU32 downsample_labels(const PlaneU32& plane);

/// Writes meta.json plus every tile of every level. `meta.levels` is
/// recomputed from the dimensions and tile size. Channel planes are given in
/// `meta.channels` order; the mask is written when present (and sets
/// has_mask). Throws kInvalidArgument on any dimension mismatch.
DatasetMeta build_pyramid(const std::filesystem::path& out_dir, DatasetMeta meta,
                          std::span<const PlaneU16> level0,
                          const PlaneU32* mask);

}  // namespace tissuelens
