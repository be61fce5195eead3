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
#include <string>

#include "tissuelens/color.hpp"
#include "tissuelens/plane.hpp"

namespace tissuelens {

constexpr int kDefaultSearchBins = 32;
constexpr int kMaxSearchBins = 256;

/// Bin indices of one channel region, quantized within its render range.
struct QuantizedPlane {
  Plane<std::uint8_t> bins;
  int bin_count = kDefaultSearchBins;
  std::string channel;
  std::uint16_t range_lo = 0;
  std::uint16_t range_hi = 65535;

  int width() const { return bins.width; }
  int height() const { return bins.height; }
  int at(int x, int y) const { return bins.at(x, y); }
};

/// floor(clamp((v - lo) / (hi - lo), 0, 1) * B), with v >= hi mapped to B - 1.
int quantize_value(std::uint16_t v, std::uint16_t lo, std::uint16_t hi, int bins);

/// Throws kInvalidArgument unless 2 <= bins <= kMaxSearchBins.
QuantizedPlane quantize(const PlaneU16& plane, const ChannelRenderSetting& setting,
                        int bins = kDefaultSearchBins);

}  // namespace tissuelens
