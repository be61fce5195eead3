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

#include "tissuelens/quantize.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "tissuelens/error.hpp"

namespace tissuelens {

int quantize_value(std::uint16_t v, std::uint16_t lo, std::uint16_t hi, int bins) {
  if (v <= lo) return 0;
  if (v >= hi) return bins - 1;
  const std::int64_t num = static_cast<std::int64_t>(v - lo) * bins;
  return static_cast<int>(std::min<std::int64_t>(bins - 1, num / (hi - lo)));
}

QuantizedPlane quantize(const PlaneU16& plane, const ChannelRenderSetting& setting, int bins) {
  setting.validate();
  if (bins < 2 || bins > kMaxSearchBins) {
    fail(ErrorKind::kInvalidArgument,
         "bin count must be in [2, " + std::to_string(kMaxSearchBins) + "]", "bins");
  }
  QuantizedPlane q;
  q.bin_count = bins;
  q.channel = setting.channel;
  q.range_lo = setting.range_lo;
  q.range_hi = setting.range_hi;
  q.bins = Plane<std::uint8_t>(plane.width, plane.height);
  std::vector<std::uint8_t> lut(65536);
  for (std::size_t v = 0; v < lut.size(); ++v) {
    lut[v] = static_cast<std::uint8_t>(
        quantize_value(static_cast<std::uint16_t>(v), setting.range_lo, setting.range_hi, bins));
  }
  std::transform(plane.data.begin(), plane.data.end(), q.bins.data.begin(),
                 [&](std::uint16_t v) { return lut[v]; });
  return q;
}

}  // namespace tissuelens
