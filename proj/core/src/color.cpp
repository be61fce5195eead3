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

#include "tissuelens/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "tissuelens/error.hpp"

namespace tissuelens {

void ChannelRenderSetting::validate() const {
  if (channel.empty()) fail(ErrorKind::kInvalidArgument, "channel name is empty", "channel");
  if (range_lo >= range_hi) {
    fail(ErrorKind::kInvalidArgument,
         "range_lo must be below range_hi for channel '" + channel + "'", "range");
  }
}

void ChannelSet::validate() const {
  std::set<std::string> seen;
  for (const auto& s : settings) {
    s.validate();
    if (!seen.insert(s.channel).second) {
      fail(ErrorKind::kInvalidArgument,
           "channel '" + s.channel + "' appears twice in set '" + label + "'", "settings");
    }
  }
}

std::vector<std::string> ChannelSet::channel_names() const {
  std::vector<std::string> names;
  for (const auto& s : settings) names.push_back(s.channel);
  return names;
}

Rgb map_intensity(std::uint16_t v, const ChannelRenderSetting& s) {
  const double t = std::clamp(
      (static_cast<double>(v) - s.range_lo) / (static_cast<double>(s.range_hi) - s.range_lo),
      0.0, 1.0);
  auto scale = [t](std::uint8_t c) {
    return static_cast<std::uint8_t>(std::floor(t * c + 0.5));
  };
  return {scale(s.color.r), scale(s.color.g), scale(s.color.b)};
}

RgbPlane composite(std::span<const PlaneU16> planes, const ChannelSet& set) {
  if (planes.size() != set.settings.size()) {
    fail(ErrorKind::kInvalidArgument, "composite needs one plane per channel setting");
  }
  if (planes.empty()) fail(ErrorKind::kInvalidArgument, "composite of an empty channel set");
  const int w = planes[0].width, h = planes[0].height;
  for (const auto& p : planes) {
    if (p.width != w || p.height != h) {
      fail(ErrorKind::kInvalidArgument, "composite planes differ in dimensions");
    }
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<std::array<std::uint16_t, 3>> acc(n, {0, 0, 0});

  // Large planes go through a per-setting lookup table built from
  // map_intensity itself, so both paths agree bit for bit.
  const bool use_lut = n > 65536;
  std::vector<Rgb> lut;
  for (std::size_t c = 0; c < planes.size(); ++c) {
    const auto& s = set.settings[c];
    if (use_lut) {
      lut.resize(65536);
      for (std::uint32_t v = 0; v < 65536; ++v) {
        lut[v] = map_intensity(static_cast<std::uint16_t>(v), s);
      }
    }
    const auto& data = planes[c].data;
    for (std::size_t i = 0; i < n; ++i) {
      const Rgb rgb = use_lut ? lut[data[i]] : map_intensity(data[i], s);
      acc[i][0] = static_cast<std::uint16_t>(std::min(255, acc[i][0] + rgb.r));
      acc[i][1] = static_cast<std::uint16_t>(std::min(255, acc[i][1] + rgb.g));
      acc[i][2] = static_cast<std::uint16_t>(std::min(255, acc[i][2] + rgb.b));
    }
  }
  RgbPlane out(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    out.data[i] = {static_cast<std::uint8_t>(acc[i][0]), static_cast<std::uint8_t>(acc[i][1]),
                   static_cast<std::uint8_t>(acc[i][2])};
  }
  return out;
}

}  // namespace tissuelens
