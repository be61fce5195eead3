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

#include <filesystem>

#include "tissuelens/plane.hpp"

namespace tissuelens {

// Baseline TIFF subset: one image per file, single unsigned-integer sample
// per pixel (8, 16 or 32 bit), uncompressed, strip layout, either byte
// order. Anything else is rejected with kInvalidArgument.

/// Reads 8- or 16-bit greyscale into a u16 plane.
PlaneU16 read_tiff_u16(const std::filesystem::path& path);
/// Reads 8-, 16- or 32-bit greyscale (label images) into a u32 plane.
PlaneU32 read_tiff_u32(const std::filesystem::path& path);

/// Writes little-endian, single-strip, uncompressed.
void write_tiff(const std::filesystem::path& path, const PlaneU16& plane);
void write_tiff(const std::filesystem::path& path, const PlaneU32& plane);

}  // namespace tissuelens
