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

#include "tissuelens/json_io.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "tissuelens/error.hpp"

namespace tissuelens {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  fail(ErrorKind::kSchema, (path.empty() ? std::string("/") : path) + ": " + what,
       path.empty() ? "/" : path);
}

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path + "/" + key, "missing field");
  return *it;
}

const json* optional_field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema(path, "expected a finite number");
  return d;
}

std::int64_t integer(const json& v, const std::string& path, std::int64_t lo, std::int64_t hi) {
  if (!v.is_number_integer()) schema(path, "expected an integer");
  const auto i = v.get<std::int64_t>();
  if (i < lo || i > hi) {
    schema(path, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return i;
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) schema(path, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) schema(path, "expected a boolean");
  return v.get<bool>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) schema(path, "expected an array");
  return v;
}

double num_field(const json& j, const std::string& path, const char* key) {
  return number(field(j, path, key), path + "/" + key);
}

std::string str_field(const json& j, const std::string& path, const char* key) {
  return string(field(j, path, key), path + "/" + key);
}

template <typename Parse>
auto parse_enum(const json& v, const std::string& path, Parse parse) {
  const std::string s = string(v, path);
  try {
    return parse(s);
  } catch (const Error& e) {
    schema(path, e.what());
  }
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const LensGeometry& g) {
  json j = {{"shape", std::string(to_string(g.shape))}, {"cx", g.center.x}, {"cy", g.center.y}};
  if (g.shape == LensShape::kCircle) {
    j["r"] = g.radius;
  } else {
    j["half_w"] = g.half_w;
    j["half_h"] = g.half_h;
  }
  return j;
}

LensGeometry geometry_from_json(const json& j, const std::string& path) {
  const LensShape shape = parse_enum(field(j, path, "shape"), path + "/shape",
                                     [](const std::string& s) { return parse_lens_shape(s); });
  const double cx = num_field(j, path, "cx");
  const double cy = num_field(j, path, "cy");
  if (shape == LensShape::kCircle) {
    const double r = num_field(j, path, "r");
    if (r < 0) schema(path + "/r", "must be non-negative");
    return LensGeometry::circle(cx, cy, r);
  }
  const double hw = num_field(j, path, "half_w");
  const double hh = num_field(j, path, "half_h");
  if (hw < 0) schema(path + "/half_w", "must be non-negative");
  if (hh < 0) schema(path + "/half_h", "must be non-negative");
  return LensGeometry::rect(cx, cy, hw, hh);
}

json to_json(const ChannelRenderSetting& s) {
  return {{"channel", s.channel},
          {"color", {s.color.r, s.color.g, s.color.b}},
          {"range_lo", s.range_lo},
          {"range_hi", s.range_hi}};
}

ChannelRenderSetting channel_setting_from_json(const json& j, const std::string& path) {
  ChannelRenderSetting s;
  s.channel = str_field(j, path, "channel");
  if (const json* c = optional_field(j, path, "color")) {
    const std::string cp = path + "/color";
    if (!c->is_array() || c->size() != 3) schema(cp, "expected [r, g, b]");
    s.color.r = static_cast<std::uint8_t>(integer((*c)[0], cp + "/0", 0, 255));
    s.color.g = static_cast<std::uint8_t>(integer((*c)[1], cp + "/1", 0, 255));
    s.color.b = static_cast<std::uint8_t>(integer((*c)[2], cp + "/2", 0, 255));
  }
  if (const json* v = optional_field(j, path, "range_lo")) {
    s.range_lo = static_cast<std::uint16_t>(integer(*v, path + "/range_lo", 0, 65535));
  }
  if (const json* v = optional_field(j, path, "range_hi")) {
    s.range_hi = static_cast<std::uint16_t>(integer(*v, path + "/range_hi", 0, 65535));
  }
  if (s.range_lo >= s.range_hi) schema(path + "/range_hi", "range_lo must be below range_hi");
  return s;
}

json to_json(const ChannelSet& set) {
  json settings = json::array();
  for (const auto& s : set.settings) settings.push_back(to_json(s));
  return {{"label", set.label}, {"settings", std::move(settings)}};
}

ChannelSet channel_set_from_json(const json& j, const std::string& path) {
  ChannelSet set;
  if (const json* l = optional_field(j, path, "label")) set.label = string(*l, path + "/label");
  const json& arr = array(field(j, path, "settings"), path + "/settings");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    set.settings.push_back(
        channel_setting_from_json(arr[i], path + "/settings/" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < set.settings.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (set.settings[i].channel == set.settings[k].channel) {
        schema(path + "/settings/" + std::to_string(i) + "/channel",
               "duplicate channel '" + set.settings[i].channel + "'");
      }
    }
  }
  return set;
}

json to_json(const LensState& lens) {
  return {{"geometry", to_json(lens.geometry)},
          {"mode", std::string(to_string(lens.mode))},
          {"magnifier", std::string(to_string(lens.magnifier))},
          {"mag_factor", lens.mag_factor},
          {"plateau_fraction", lens.plateau_fraction},
          {"lens_channel_set", to_json(lens.lens_channel_set)},
          {"blend_alpha", lens.blend_alpha}};
}

LensState lens_state_from_json(const json& j, const std::string& path) {
  LensState lens;
  lens.geometry = geometry_from_json(field(j, path, "geometry"), path + "/geometry");
  if (const json* v = optional_field(j, path, "mode")) {
    lens.mode = parse_enum(*v, path + "/mode", [](const std::string& s) { return parse_lens_mode(s); });
  }
  if (const json* v = optional_field(j, path, "magnifier")) {
    lens.magnifier =
        parse_enum(*v, path + "/magnifier", [](const std::string& s) { return parse_magnifier(s); });
  }
  if (const json* v = optional_field(j, path, "mag_factor")) {
    lens.mag_factor = number(*v, path + "/mag_factor");
  }
  if (const json* v = optional_field(j, path, "plateau_fraction")) {
    lens.plateau_fraction = number(*v, path + "/plateau_fraction");
  }
  if (const json* v = optional_field(j, path, "lens_channel_set")) {
    lens.lens_channel_set = channel_set_from_json(*v, path + "/lens_channel_set");
  }
  if (const json* v = optional_field(j, path, "blend_alpha")) {
    lens.blend_alpha = number(*v, path + "/blend_alpha");
  }
  try {
    lens.validate();
  } catch (const Error& e) {
    schema(path + (e.detail().empty() ? "" : "/" + e.detail()), e.what());
  }
  return lens;
}

json to_json(const RegionRect& r) {
  return {{"level", r.level}, {"x0", r.x0}, {"y0", r.y0}, {"x1", r.x1}, {"y1", r.y1}};
}

RegionRect region_from_json(const json& j, const std::string& path) {
  constexpr std::int64_t kMax = std::numeric_limits<int>::max();
  RegionRect r;
  r.level = static_cast<int>(integer(field(j, path, "level"), path + "/level", 0, 62));
  r.x0 = static_cast<int>(integer(field(j, path, "x0"), path + "/x0", 0, kMax));
  r.y0 = static_cast<int>(integer(field(j, path, "y0"), path + "/y0", 0, kMax));
  r.x1 = static_cast<int>(integer(field(j, path, "x1"), path + "/x1", 0, kMax));
  r.y1 = static_cast<int>(integer(field(j, path, "y1"), path + "/y1", 0, kMax));
  if (r.x1 <= r.x0) schema(path + "/x1", "must exceed x0");
  if (r.y1 <= r.y0) schema(path + "/y1", "must exceed y0");
  return r;
}

json to_json(const RegionStats& s) {
  json hists = json::array();
  for (const auto& h : s.histograms) {
    hists.push_back({{"channel", h.channel},
                     {"bin_edges", h.bin_edges},
                     {"counts", h.counts},
                     {"global_counts", h.global_counts},
                     {"clipped", h.clipped},
                     {"region_mean", optional_number(h.region_mean)},
                     {"global_mean", h.global_mean}});
  }
  json radial = json::array();
  for (const auto& r : s.radial_means) {
    radial.push_back({{"channel", r.channel},
                      {"region_mean", optional_number(r.region_mean)},
                      {"global_mean", r.global_mean}});
  }
  json types = json::array();
  for (const auto& [type, count] : s.type_counts) {
    types.push_back({{"type", type}, {"count", count}});
  }
  return {{"cell_ids", s.cell_ids},   {"n_cells", s.n_cells},
          {"empty", s.empty},         {"histograms", std::move(hists)},
          {"radial_means", std::move(radial)}, {"type_counts", std::move(types)},
          {"area_um2", s.area_um2}};
}

namespace {

template <typename T>
std::vector<T> uint_array(const json& v, const std::string& path, std::int64_t hi) {
  std::vector<T> out;
  const json& arr = array(v, path);
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(static_cast<T>(integer(arr[i], path + "/" + std::to_string(i), 0, hi)));
  }
  return out;
}

std::vector<double> double_array(const json& v, const std::string& path) {
  std::vector<double> out;
  const json& arr = array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(number(arr[i], path + "/" + std::to_string(i)));
  }
  return out;
}

std::optional<double> optional_double(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (v.is_null()) return std::nullopt;
  return number(v, path + "/" + key);
}

constexpr std::int64_t kMaxCount = std::numeric_limits<std::int64_t>::max();

}  // namespace

RegionStats region_stats_from_json(const json& j, const std::string& path) {
  RegionStats s;
  s.cell_ids = uint_array<std::uint32_t>(field(j, path, "cell_ids"), path + "/cell_ids",
                                         std::numeric_limits<std::uint32_t>::max());
  s.n_cells = static_cast<std::size_t>(integer(field(j, path, "n_cells"), path + "/n_cells", 0, kMaxCount));
  s.empty = boolean(field(j, path, "empty"), path + "/empty");
  const json& hists = array(field(j, path, "histograms"), path + "/histograms");
  for (std::size_t i = 0; i < hists.size(); ++i) {
    const std::string p = path + "/histograms/" + std::to_string(i);
    ChannelHistogram h;
    h.channel = str_field(hists[i], p, "channel");
    h.bin_edges = double_array(field(hists[i], p, "bin_edges"), p + "/bin_edges");
    h.counts = uint_array<std::uint64_t>(field(hists[i], p, "counts"), p + "/counts", kMaxCount);
    h.global_counts = uint_array<std::uint64_t>(field(hists[i], p, "global_counts"),
                                                p + "/global_counts", kMaxCount);
    h.clipped = static_cast<std::uint64_t>(integer(field(hists[i], p, "clipped"), p + "/clipped", 0, kMaxCount));
    h.region_mean = optional_double(hists[i], p, "region_mean");
    h.global_mean = num_field(hists[i], p, "global_mean");
    s.histograms.push_back(std::move(h));
  }
  const json& radial = array(field(j, path, "radial_means"), path + "/radial_means");
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const std::string p = path + "/radial_means/" + std::to_string(i);
    s.radial_means.push_back({str_field(radial[i], p, "channel"),
                              optional_double(radial[i], p, "region_mean"),
                              num_field(radial[i], p, "global_mean")});
  }
  const json& types = array(field(j, path, "type_counts"), path + "/type_counts");
  for (std::size_t i = 0; i < types.size(); ++i) {
    const std::string p = path + "/type_counts/" + std::to_string(i);
    s.type_counts.emplace_back(
        str_field(types[i], p, "type"),
        static_cast<std::uint64_t>(integer(field(types[i], p, "count"), p + "/count", 0, kMaxCount)));
  }
  s.area_um2 = num_field(j, path, "area_um2");
  return s;
}

json to_json(const CaptureState& s) {
  const Point c = s.view_center();
  return {{"viewport", to_json(s.viewport)},
          {"view_center", {c.x, c.y}},
          {"zoom", s.zoom()},
          {"context_channel_set", to_json(s.context_channel_set)},
          {"lens", to_json(s.lens)},
          {"stats_channels", s.stats_channels},
          {"type_order", std::string(to_string(s.type_order))}};
}

CaptureState capture_state_from_json(const json& j, const std::string& path) {
  CaptureState s;
  s.viewport = region_from_json(field(j, path, "viewport"), path + "/viewport");
  s.context_channel_set =
      channel_set_from_json(field(j, path, "context_channel_set"), path + "/context_channel_set");
  s.lens = lens_state_from_json(field(j, path, "lens"), path + "/lens");
  if (const json* v = optional_field(j, path, "stats_channels")) {
    const json& arr = array(*v, path + "/stats_channels");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      s.stats_channels.push_back(string(arr[i], path + "/stats_channels/" + std::to_string(i)));
    }
  }
  if (const json* v = optional_field(j, path, "type_order")) {
    s.type_order = parse_enum(*v, path + "/type_order",
                              [](const std::string& t) { return parse_type_order(t); });
  }
  return s;
}

json to_json(const RichSnapshot& s) {
  return {{"id", s.id},
          {"title", s.title},
          {"description", s.description},
          {"created_at", s.created_at},
          {"dataset_meta_hash", s.dataset_meta_hash},
          {"geometry", to_json(s.state.lens.geometry)},
          {"state", to_json(s.state)},
          {"cell_ids", s.cell_ids},
          {"stats", to_json(s.stats)},
          {"thumbnail_png", base64_encode(s.thumbnail_png)},
          {"provisional", s.provisional}};
}

RichSnapshot snapshot_from_json(const json& j, const std::string& path) {
  RichSnapshot s;
  s.id = str_field(j, path, "id");
  s.title = str_field(j, path, "title");
  s.description = str_field(j, path, "description");
  s.created_at = str_field(j, path, "created_at");
  s.dataset_meta_hash = str_field(j, path, "dataset_meta_hash");
  s.state = capture_state_from_json(field(j, path, "state"), path + "/state");
  s.cell_ids = uint_array<std::uint32_t>(field(j, path, "cell_ids"), path + "/cell_ids",
                                         std::numeric_limits<std::uint32_t>::max());
  s.stats = region_stats_from_json(field(j, path, "stats"), path + "/stats");
  try {
    s.thumbnail_png = base64_decode(str_field(j, path, "thumbnail_png"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kSchema) throw;
    fail(ErrorKind::kIntegrity, path + "/thumbnail_png: " + e.what(), path + "/thumbnail_png");
  }
  if (const json* v = optional_field(j, path, "provisional")) {
    s.provisional = boolean(*v, path + "/provisional");
  }
  if (!std::is_sorted(s.cell_ids.begin(), s.cell_ids.end())) {
    schema(path + "/cell_ids", "must be ascending");
  }
  return s;
}

json to_geojson(const ContourSet& contours) {
  const ContourSet c0 = contours.in_level0();
  auto ring_json = [](const Ring& r) {
    json arr = json::array();
    for (const auto& p : r) arr.push_back({p.x, p.y});
    return arr;
  };
  json features = json::array();
  for (const auto& poly : c0.polygons) {
    json rings = json::array();
    rings.push_back(ring_json(poly.outer));
    for (const auto& h : poly.holes) rings.push_back(ring_json(h));
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", std::move(rings)}}},
                        {"properties",
                         {{"similarity_threshold", contours.threshold},
                          {"area_px2", poly.area_px2}}}});
  }
  return {{"type", "FeatureCollection"},
          {"features", std::move(features)},
          {"properties", {{"similarity_threshold", contours.threshold}}}};
}

json to_json(const SearchRequest& r) {
  return {{"channels", to_json(r.channels)},
          {"geometry", to_json(r.geometry)},
          {"threshold", r.threshold},
          {"bins", r.bins}};
}

SearchRequest search_request_from_json(const json& j, const std::string& path) {
  SearchRequest r;
  const json& ch = field(j, path, "channels");
  if (ch.is_array()) {
    // Shorthand: list of channel names or settings.
    for (std::size_t i = 0; i < ch.size(); ++i) {
      const std::string p = path + "/channels/" + std::to_string(i);
      if (ch[i].is_string()) {
        ChannelRenderSetting s;
        s.channel = ch[i].get<std::string>();
        r.channels.settings.push_back(s);
      } else {
        r.channels.settings.push_back(channel_setting_from_json(ch[i], p));
      }
    }
  } else {
    r.channels = channel_set_from_json(ch, path + "/channels");
  }
  if (r.channels.settings.empty()) schema(path + "/channels", "at least one channel required");
  r.geometry = geometry_from_json(field(j, path, "geometry"), path + "/geometry");
  if (const json* v = optional_field(j, path, "threshold")) {
    r.threshold = number(*v, path + "/threshold");
    if (r.threshold < 0.0 || r.threshold > 1.0) schema(path + "/threshold", "must be in [0, 1]");
  }
  if (const json* v = optional_field(j, path, "bins")) {
    r.bins = static_cast<int>(integer(*v, path + "/bins", 2, kMaxSearchBins));
  }
  return r;
}

namespace {
constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += kB64[(v >> 6) & 63];
    out += kB64[v & 63];
  }
  if (i + 1 == bytes.size()) {
    const std::uint32_t v = bytes[i] << 16;
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += kB64[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::array<int, 256> rev;
  rev.fill(-1);
  for (int k = 0; k < 64; ++k) rev[static_cast<unsigned char>(kB64[k])] = k;
  if (text.size() % 4 != 0) fail(ErrorKind::kIntegrity, "base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        v[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) fail(ErrorKind::kIntegrity, "base64 padding in the middle");
      v[k] = rev[static_cast<unsigned char>(c)];
      if (v[k] < 0) fail(ErrorKind::kIntegrity, "invalid base64 character");
    }
    const std::uint32_t w = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out.push_back(static_cast<std::uint8_t>(w >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(w >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(w));
  }
  return out;
}

std::string canonical_dump(const json& j) { return j.dump(); }

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kInvalidArgument, what + " is not valid JSON: " + e.what(), "/");
  }
}

}  // namespace tissuelens
