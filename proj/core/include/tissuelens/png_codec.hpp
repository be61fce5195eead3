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
#include <span>
#include <vector>

#include "tissuelens/plane.hpp"

namespace tissuelens {

using Bytes = std::vector<std::uint8_t>;

/// 8-bit RGBA, no ancillary chunks, fixed compression settings: identical
/// input yields identical bytes.
Bytes encode_png_rgba(const RgbaPlane& image);
/// 16-bit greyscale, lossless.
Bytes encode_png_gray16(const PlaneU16& plane);

/// Decoders accept only the matching color type and bit depth; anything else
/// raises kInvalidArgument.
RgbaPlane decode_png_rgba(std::span<const std::uint8_t> png);
PlaneU16 decode_png_gray16(std::span<const std::uint8_t> png);

}  // namespace tissuelens
