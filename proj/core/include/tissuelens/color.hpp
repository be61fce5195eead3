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
#include <string>
#include <vector>

#include "tissuelens/plane.hpp"

namespace tissuelens {

/// How one channel is drawn: raw intensities in [range_lo, range_hi] ramp
/// linearly from black to `color`.
struct ChannelRenderSetting {
  std::string channel;
  Rgb color{255, 255, 255};
  std::uint16_t range_lo = 0;
  std::uint16_t range_hi = 65535;

  void validate() const;  // range_lo < range_hi, non-empty channel
  friend bool operator==(const ChannelRenderSetting&, const ChannelRenderSetting&) = default;
};

struct ChannelSet {
  std::string label;
  std::vector<ChannelRenderSetting> settings;

  void validate() const;  // each setting valid, no channel twice
  std::vector<std::string> channel_names() const;
  friend bool operator==(const ChannelSet&, const ChannelSet&) = default;
};

/// t = clamp((v - lo) / (hi - lo), 0, 1); each component is t * color
/// rounded half-up.
Rgb map_intensity(std::uint16_t v, const ChannelRenderSetting& setting);

/// Additive mix: per pixel, component-wise sum of the mapped colors clamped
/// to 255. `planes[i]` holds the samples for `set.settings[i]`.
RgbPlane composite(std::span<const PlaneU16> planes, const ChannelSet& set);

}  // namespace tissuelens
