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

#include "tissuelens/snapshot.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <random>

#include "tissuelens/error.hpp"
#include "tissuelens/png_codec.hpp"
#include "tissuelens/render.hpp"
#include "tissuelens/search.hpp"

namespace tissuelens {

Point CaptureState::view_center() const {
  const double s = std::ldexp(1.0, viewport.level);
  return {(viewport.x0 + viewport.x1) * 0.5 * s, (viewport.y0 + viewport.y1) * 0.5 * s};
}

double CaptureState::zoom() const { return std::ldexp(1.0, -viewport.level); }

std::string make_snapshot_id(std::uint64_t epoch_ms, std::uint32_t random_suffix) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx-%08x", static_cast<unsigned long long>(epoch_ms),
                static_cast<unsigned>(random_suffix));
  return buf;
}

namespace {

std::uint64_t now_ms() {
  using namespace std::chrono;
  return static_cast<std::uint64_t>(
      duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count());
}

std::uint32_t random_u32() {
  static thread_local std::mt19937 rng{std::random_device{}()};
  return static_cast<std::uint32_t>(rng());
}

void check_channel(const Workspace& ws, const std::string& name) {
  if (!ws.meta().has_channel(name)) {
    fail(ErrorKind::kLookup, "snapshot references channel '" + name + "' missing from dataset",
         name);
  }
}

void validate_state(const Workspace& ws, const CaptureState& state) {
  ws.dataset().check_region(state.viewport);
  state.context_channel_set.validate();
  state.lens.validate();
  for (const auto& s : state.context_channel_set.settings) check_channel(ws, s.channel);
  for (const auto& s : state.lens.lens_channel_set.settings) check_channel(ws, s.channel);
  for (const auto& c : state.stats_channels) check_channel(ws, c);
}

}  // namespace

std::string new_snapshot_id() { return make_snapshot_id(now_ms(), random_u32()); }

std::string format_utc_timestamp(std::uint64_t epoch_ms) {
  const std::time_t secs = static_cast<std::time_t>(epoch_ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03uZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<unsigned>(epoch_ms % 1000));
  return buf;
}

RgbaPlane render_thumbnail(const Workspace& ws, const CaptureState& state) {
  const RegionRect& vp = state.viewport;
  const double s = std::ldexp(1.0, -vp.level);
  const auto& g = state.lens.geometry;
  const int x0 = std::max(0, static_cast<int>(std::floor((g.center.x - g.extent_x()) * s)) - vp.x0);
  const int y0 = std::max(0, static_cast<int>(std::floor((g.center.y - g.extent_y()) * s)) - vp.y0);
  const int x1 = std::min(vp.width(), static_cast<int>(std::ceil((g.center.x + g.extent_x()) * s)) - vp.x0);
  const int y1 = std::min(vp.height(), static_cast<int>(std::ceil((g.center.y + g.extent_y()) * s)) - vp.y0);
  if (x0 >= x1 || y0 >= y1) {
    fail(ErrorKind::kInvalidArgument, "lens does not intersect the viewport", "geometry");
  }
  const CellOverlay overlay = ws.overlay();
  const RgbaPlane full = render_viewport(ws.dataset(), vp, state.context_channel_set, state.lens,
                                         ws.has_cells() ? &overlay : nullptr);
  const RgbaPlane crop = full.crop(x0, y0, x1, y1);
  const int edge = std::max(crop.width, crop.height);
  if (edge <= kThumbnailMaxEdge) return crop;
  const double scale = static_cast<double>(kThumbnailMaxEdge) / edge;
  const int ow = std::max(1, static_cast<int>(std::lround(crop.width * scale)));
  const int oh = std::max(1, static_cast<int>(std::lround(crop.height * scale)));
  RgbaPlane out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    const int sy = std::min(crop.height - 1, static_cast<int>((y + 0.5) * crop.height / oh));
    for (int x = 0; x < ow; ++x) {
      const int sx = std::min(crop.width - 1, static_cast<int>((x + 0.5) * crop.width / ow));
      out.at(x, y) = crop.at(sx, sy);
    }
  }
  return out;
}

RichSnapshot create_snapshot(const Workspace& ws, const CaptureState& state, std::string title,
                             std::string description) {
  validate_state(ws, state);
  RichSnapshot snap;
  const std::uint64_t ms = now_ms();
  snap.id = make_snapshot_id(ms, random_u32());
  snap.title = std::move(title);
  snap.description = std::move(description);
  snap.created_at = format_utc_timestamp(ms);
  snap.dataset_meta_hash = ws.meta_hash();
  snap.state = state;
  snap.stats = ws.stats(state.lens.geometry, state.stats_channels, state.type_order);
  snap.cell_ids = snap.stats.cell_ids;
  snap.thumbnail_png = encode_png_rgba(render_thumbnail(ws, state));
  return snap;
}

CaptureState restore(const RichSnapshot& snapshot, const Workspace& ws, bool trust_stats) {
  for (const auto& s : snapshot.state.context_channel_set.settings) check_channel(ws, s.channel);
  for (const auto& s : snapshot.state.lens.lens_channel_set.settings) check_channel(ws, s.channel);
  for (const auto& c : snapshot.state.stats_channels) check_channel(ws, c);
  if (trust_stats && snapshot.dataset_meta_hash != ws.meta_hash()) {
    fail(ErrorKind::kConflict,
         "snapshot was captured on a different dataset (" + snapshot.dataset_meta_hash + ")",
         snapshot.dataset_meta_hash);
  }
  ws.dataset().check_region(snapshot.state.viewport);
  return snapshot.state;
}

Point ring_centroid(const Ring& ring) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const double cross = ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    a += cross;
    cx += (ring[i].x + ring[i + 1].x) * cross;
    cy += (ring[i].y + ring[i + 1].y) * cross;
  }
  if (a == 0.0) return ring.empty() ? Point{} : ring.front();
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

ExtendResult extend_search(const Workspace& ws, const RichSnapshot& snapshot, double threshold,
                           int tile_size) {
  SearchRequest req;
  req.channels = snapshot.state.lens.lens_channel_set;
  req.geometry = snapshot.state.lens.geometry;
  req.threshold = threshold;
  ExtendResult out;
  out.contours = search_whole_image(ws.dataset(), req, tile_size);

  const CaptureState& base = snapshot.state;
  const double s = std::ldexp(1.0, -base.viewport.level);
  const LevelDims dims = ws.meta().level_dims(base.viewport.level);
  int k = 0;
  for (const auto& poly : out.contours.polygons) {
    ++k;
    const Point c = ring_centroid(poly.outer);
    CaptureState st = base;
    st.lens.geometry.center = c;
    const int dx = static_cast<int>(std::lround((c.x - base.lens.geometry.center.x) * s));
    const int dy = static_cast<int>(std::lround((c.y - base.lens.geometry.center.y) * s));
    const int w = base.viewport.width(), h = base.viewport.height();
    st.viewport.x0 = std::clamp(base.viewport.x0 + dx, 0, dims.width - w);
    st.viewport.y0 = std::clamp(base.viewport.y0 + dy, 0, dims.height - h);
    st.viewport.x1 = st.viewport.x0 + w;
    st.viewport.y1 = st.viewport.y0 + h;
    RichSnapshot p = create_snapshot(ws, st, snapshot.title + " (match " + std::to_string(k) + ")",
                                     "Similar to " + snapshot.id);
    p.provisional = true;
    out.provisional.push_back(std::move(p));
  }
  return out;
}

std::vector<RichSnapshot> filter_snapshots(const std::vector<RichSnapshot>& snapshots,
                                           std::string_view query) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
  };
  const std::string q = lower(query);
  std::vector<RichSnapshot> out;
  for (const auto& s : snapshots) {
    if (lower(s.title).find(q) != std::string::npos ||
        lower(s.description).find(q) != std::string::npos) {
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace tissuelens
