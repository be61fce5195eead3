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
#include <string>
#include <vector>

#include "tissuelens/plane.hpp"

namespace tissuelens {

/// Tile file locations inside a dataset directory:
///   channels/{name}/{level}/{tx}_{ty}.bin   (u16, little-endian, row-major)
///   mask/{level}/{tx}_{ty}.bin              (u32, little-endian, row-major)
std::filesystem::path channel_tile_path(const std::filesystem::path& root,
                                        const std::string& channel, int level,
                                        int tx, int ty);
std::filesystem::path mask_tile_path(const std::filesystem::path& root,
                                     int level, int tx, int ty);

/// Writes `plane` as raw little-endian samples. Creates parent directories.
template <typename T>
void write_raw(const std::filesystem::path& path, const Plane<T>& plane);

/// Reads a raw tile of known dimensions. Throws kIntegrity naming the file
/// when its size differs from w*h*sizeof(T), kIo when it cannot be opened.
template <typename T>
Plane<T> read_raw(const std::filesystem::path& path, int w, int h);

/// Whole-file helpers used by the JSON/CSV writers.
std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames, so readers never observe
/// a partially written file.
void write_text_file_atomic(const std::filesystem::path& path,
                            const std::string& text);
void write_binary_file(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes);

}  // namespace tissuelens
