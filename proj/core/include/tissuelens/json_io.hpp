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
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tissuelens/color.hpp"
#include "tissuelens/contours.hpp"
#include "tissuelens/dataset.hpp"
#include "tissuelens/lens.hpp"
#include "tissuelens/region_stats.hpp"
#include "tissuelens/search.hpp"
#include "tissuelens/snapshot.hpp"

namespace tissuelens {

using nlohmann::json;

// Readers throw kSchema with a JSON-pointer style field path in detail().

json to_json(const LensGeometry& g);
LensGeometry geometry_from_json(const json& j, const std::string& path = "");

json to_json(const ChannelRenderSetting& s);
ChannelRenderSetting channel_setting_from_json(const json& j, const std::string& path = "");

json to_json(const ChannelSet& set);
ChannelSet channel_set_from_json(const json& j, const std::string& path = "");

json to_json(const LensState& lens);
LensState lens_state_from_json(const json& j, const std::string& path = "");

json to_json(const RegionRect& r);
RegionRect region_from_json(const json& j, const std::string& path = "");

json to_json(const RegionStats& s);
RegionStats region_stats_from_json(const json& j, const std::string& path = "");

json to_json(const CaptureState& s);
CaptureState capture_state_from_json(const json& j, const std::string& path = "");

json to_json(const RichSnapshot& s);
RichSnapshot snapshot_from_json(const json& j, const std::string& path = "");

/// FeatureCollection of Polygon features in level-0 pixel coordinates.
json to_geojson(const ContourSet& contours);

json to_json(const SearchRequest& r);
SearchRequest search_request_from_json(const json& j, const std::string& path = "");

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws kIntegrity on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Sorted keys, no whitespace.
std::string canonical_dump(const json& j);

/// Parses `text`; syntax errors raise kInvalidArgument.
json parse_json(std::string_view text, const std::string& what);

}  // namespace tissuelens
