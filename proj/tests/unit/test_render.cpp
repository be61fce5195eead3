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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "tissuelens/color.hpp"
#include "tissuelens/error.hpp"
#include "tissuelens/lens.hpp"
#include "tissuelens/pyramid.hpp"
#include "tissuelens/render.hpp"

using namespace tissuelens;
using tissuelens::testing::TempDir;

namespace {

Rgb oracle_map(std::uint16_t v, const ChannelRenderSetting& s) {
  double t = (static_cast<double>(v) - s.range_lo) / (s.range_hi - s.range_lo);
  t = std::clamp(t, 0.0, 1.0);
  auto c = [t](int comp) { return static_cast<std::uint8_t>(std::floor(t * comp + 0.5)); };
  return {c(s.color.r), c(s.color.g), c(s.color.b)};
}

std::shared_ptr<const Dataset> gradient_dataset(const std::filesystem::path& dir, int w, int h,
                                                int tile = 64) {
  PlaneU16 a(w, h), b(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      a.at(x, y) = static_cast<std::uint16_t>(10 * x + 3 * y);
      b.at(x, y) = static_cast<std::uint16_t>(4000 - 5 * y + x);
    }
  }
  DatasetMeta meta;
  meta.width_px = w;
  meta.height_px = h;
  meta.tile_size = tile;
  meta.pixel_size_um = 0.5;
  meta.channels = {{"a", std::nullopt}, {"b", std::nullopt}};
  build_pyramid(dir, meta, std::vector<PlaneU16>{a, b}, nullptr);
  return Dataset::open(dir);
}

ChannelSet set_of(std::initializer_list<ChannelRenderSetting> s) {
  ChannelSet set;
  set.settings = s;
  return set;
}

}  // namespace

TEST_SUITE("render") {

TEST_CASE("map_intensity examples") {
  ChannelRenderSetting s{"c", {200, 100, 0}, 0, 200};
  CHECK(map_intensity(100, s) == Rgb{100, 50, 0});
  CHECK(map_intensity(0, s) == Rgb{0, 0, 0});
  ChannelRenderSetting red{"r", {255, 0, 0}, 10, 20};
  CHECK(map_intensity(5, red) == Rgb{0, 0, 0});
  CHECK(map_intensity(20, red) == Rgb{255, 0, 0});
  CHECK(map_intensity(60000, red) == Rgb{255, 0, 0});
  ChannelRenderSetting bad{"x", {1, 1, 1}, 5, 5};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("composite is an additive clamp") {
  PlaneU16 p(2, 1, 65535);
  const ChannelSet set = set_of({{"r", {255, 0, 0}, 0, 100}, {"b", {0, 0, 255}, 0, 100}});
  const std::vector<PlaneU16> planes = {p, p};
  const RgbPlane out = composite(planes, set);
  CHECK(out.at(0, 0) == Rgb{255, 0, 255});

  std::mt19937 rng(4);
  PlaneU16 q(16, 16);
  for (auto& v : q.data) v = static_cast<std::uint16_t>(rng() % 5000);
  const ChannelSet one = set_of({{"q", {40, 200, 90}, 100, 4000}});
  const RgbPlane single = composite(std::vector<PlaneU16>{q}, one);
  for (std::size_t i = 0; i < q.data.size(); ++i) {
    CHECK(single.data[i] == oracle_map(q.data[i], one.settings[0]));
  }
}

TEST_CASE("composite equals the scalar reference loop") {
  std::mt19937 rng(9);
  std::vector<PlaneU16> planes(3, PlaneU16(16, 16));
  for (auto& p : planes) {
    for (auto& v : p.data) v = static_cast<std::uint16_t>(rng());
  }
  ChannelSet set = set_of({{"a", {255, 30, 0}, 1000, 50000},
                           {"b", {0, 255, 120}, 0, 65535},
                           {"c", {90, 90, 255}, 30000, 31000}});
  const RgbPlane out = composite(planes, set);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    int r = 0, g = 0, b = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      const Rgb m = oracle_map(planes[c].data[i], set.settings[c]);
      r += m.r;
      g += m.g;
      b += m.b;
    }
    CHECK(out.data[i] == Rgb{static_cast<std::uint8_t>(std::min(r, 255)),
                             static_cast<std::uint8_t>(std::min(g, 255)),
                             static_cast<std::uint8_t>(std::min(b, 255))});
  }
  // Channel order does not matter.
  std::vector<PlaneU16> rev(planes.rbegin(), planes.rend());
  ChannelSet rset;
  rset.settings.assign(set.settings.rbegin(), set.settings.rend());
  CHECK(composite(rev, rset) == out);

  std::vector<PlaneU16> mism = {PlaneU16(4, 4), PlaneU16(4, 5)};
  CHECK_THROWS_AS(composite(mism, set_of({{"x", {1, 1, 1}, 0, 9}, {"y", {1, 1, 1}, 0, 9}})), Error);
}

TEST_CASE("duplicate channels in a set are rejected") {
  const ChannelSet dup = set_of({{"a", {1, 1, 1}, 0, 9}, {"a", {2, 2, 2}, 0, 9}});
  CHECK_THROWS_AS(dup.validate(), Error);
}

TEST_CASE("cell boundaries follow the 4-neighborhood rule") {
  PlaneU32 bg(10, 10, 0);
  const TypePalette palette = TypePalette::for_types({"T cell", "B cell"});
  const RgbaPlane none = render_cell_boundaries(bg, {}, palette);
  CHECK(std::all_of(none.data.begin(), none.data.end(), [](const Rgba& p) { return p.a == 0; }));

  // Disk cell 1 and an adjacent square cell 2 with an unknown type.
  PlaneU32 mask(24, 24, 0);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 24; ++x) {
      if ((x - 8) * (x - 8) + (y - 12) * (y - 12) <= 25) mask.at(x, y) = 1;
      if (x >= 14 && x < 20 && y >= 9 && y < 15) mask.at(x, y) = 2;
    }
  }
  CellTypeMap types = {{1, "T cell"}, {2, "Mystery"}};
  const RgbaPlane out = render_cell_boundaries(mask, types, palette);
  const Rgb t = palette.colors.at("T cell");
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 24; ++x) {
      const std::uint32_t id = mask.at(x, y);
      bool boundary = false;
      if (id != 0) {
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = x + dx[k], ny = y + dy[k];
          if (nx < 0 || ny < 0 || nx >= 24 || ny >= 24) continue;
          if (mask.at(nx, ny) != id) boundary = true;
        }
      }
      const Rgba& p = out.at(x, y);
      CHECK((p.a == 255) == boundary);
      if (boundary && id == 1) CHECK(Rgb{p.r, p.g, p.b} == t);
      if (boundary && id == 2) CHECK(Rgb{p.r, p.g, p.b} == palette.fallback);
    }
  }
  // Touching edges of both cells are outlined.
  CHECK(out.at(13, 12).a == 255);
  CHECK(out.at(14, 12).a == 255);
}

TEST_CASE("magnifier source mapping") {
  const LensGeometry g = LensGeometry::circle(500, 500, 100);
  for (auto m : {Magnifier::kNone, Magnifier::kNormal, Magnifier::kFisheye, Magnifier::kPlateau}) {
    CHECK(lens_source_coord({500, 500}, g, m, 3.0, 0.75) == Point{500, 500});
    CHECK(source_radius(0.0, 100, m, 3.0, 0.75) == 0.0);
  }
  CHECK(source_radius(0.75, 100, Magnifier::kPlateau, 2.0, 0.75) == doctest::Approx(37.5));
  CHECK(source_radius(1.0, 100, Magnifier::kFisheye, 4.0, 0.75) == doctest::Approx(100.0));
  CHECK(source_radius(1.0, 100, Magnifier::kPlateau, 4.0, 0.75) == doctest::Approx(100.0));
  CHECK(source_radius(1.0, 100, Magnifier::kNormal, 4.0, 0.75) == doctest::Approx(25.0));
  // f = 1 collapses to the normal magnifier.
  CHECK(source_radius(1.0, 100, Magnifier::kPlateau, 4.0, 1.0) == doctest::Approx(25.0));

  const Point p = lens_source_coord({560, 500}, g, Magnifier::kNormal, 2.0, 0.75);
  CHECK(p.x == doctest::Approx(530));
  CHECK(p.y == doctest::Approx(500));
  CHECK_THROWS_AS(lens_source_coord({700, 500}, g, Magnifier::kNormal, 2.0, 0.75), Error);
  const LensGeometry r = LensGeometry::rect(0, 0, 10, 10);
  CHECK_THROWS_AS(lens_source_coord({1, 1}, r, Magnifier::kFisheye, 2.0, 0.75), Error);
  CHECK(lens_source_coord({1, 1}, r, Magnifier::kNone, 1.0, 0.75) == Point{1, 1});

  for (auto m : {Magnifier::kNormal, Magnifier::kFisheye, Magnifier::kPlateau}) {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double s = source_radius(i / 1000.0, 100, m, 2.5, 0.6);
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("lens state validation") {
  LensState lens;
  lens.geometry = LensGeometry::circle(10, 10, 5);
  lens.mag_factor = 0.5;
  CHECK_THROWS_AS(lens.validate(), Error);
  lens.mag_factor = 2;
  lens.plateau_fraction = 0.0;
  CHECK_THROWS_AS(lens.validate(), Error);
  lens.plateau_fraction = 1.0;
  lens.validate();
  lens.geometry = LensGeometry::rect(10, 10, 5, 5);
  lens.magnifier = Magnifier::kPlateau;
  CHECK_THROWS_AS(lens.validate(), Error);
  lens.geometry = LensGeometry::circle(10, 10, 0);
  lens.magnifier = Magnifier::kNone;
  CHECK_THROWS_AS(lens.validate(), Error);
}

TEST_CASE("source level selection") {
  CHECK(lens_source_level(3, 1.0) == 3);
  CHECK(lens_source_level(3, 2.0) == 2);
  CHECK(lens_source_level(3, 3.0) == 1);
  CHECK(lens_source_level(3, 8.0) == 0);
  CHECK(lens_source_level(1, 16.0) == 0);
}

TEST_CASE("identity lens equals the context render") {
  TempDir dir;
  const auto ds = gradient_dataset(dir.path(), 300, 220);
  const ChannelSet ctx = set_of({{"a", {255, 0, 0}, 0, 3000}, {"b", {0, 255, 0}, 2000, 4500}});
  for (int level : {0, 1}) {
    const auto d = ds->meta().level_dims(level);
    const RegionRect vp{level, 0, 0, d.width, d.height};
    LensState lens;
    lens.geometry = LensGeometry::circle(140, 100, 40);
    lens.lens_channel_set = ctx;
    lens.mag_factor = 1.0;
    lens.magnifier = Magnifier::kNormal;
    const RgbaPlane plain = render_viewport(*ds, vp, ctx, std::nullopt);
    CHECK(render_viewport(*ds, vp, ctx, lens) == plain);
    lens.magnifier = Magnifier::kNone;
    CHECK(render_viewport(*ds, vp, ctx, lens) == plain);

    // Alpha 0 leaves the context untouched even with a different lens set.
    lens.lens_channel_set = set_of({{"b", {0, 0, 255}, 0, 100}});
    lens.blend_alpha = 0.0;
    lens.mag_factor = 3.0;
    lens.magnifier = Magnifier::kFisheye;
    CHECK(render_viewport(*ds, vp, ctx, lens) == plain);
  }
}

TEST_CASE("blend mixes lens and context per component") {
  TempDir dir;
  const auto ds = gradient_dataset(dir.path(), 128, 128);
  const RegionRect vp{0, 0, 0, 128, 128};
  const ChannelSet ctx = set_of({{"a", {255, 0, 0}, 0, 2000}});
  LensState lens;
  lens.geometry = LensGeometry::circle(64, 64, 20);
  lens.lens_channel_set = set_of({{"b", {0, 0, 255}, 3000, 4200}});
  lens.blend_alpha = 0.3;
  const RgbaPlane base = render_viewport(*ds, vp, ctx, std::nullopt);
  const RgbaPlane lens_only = render_viewport(*ds, vp, lens.lens_channel_set, std::nullopt);
  const RgbaPlane mixed = render_viewport(*ds, vp, ctx, lens);
  for (int y = 0; y < 128; ++y) {
    for (int x = 0; x < 128; ++x) {
      const bool inside = lens.geometry.contains({x + 0.5, y + 0.5});
      const Rgba& c = base.at(x, y);
      const Rgba& l = lens_only.at(x, y);
      const Rgba& m = mixed.at(x, y);
      if (!inside) {
        CHECK(m == c);
        continue;
      }
      auto mix = [](int lv, int cv) { return static_cast<int>(std::floor(0.3 * lv + (1.0 - 0.3) * cv + 0.5)); };
      CHECK(m.r == mix(l.r, c.r));
      CHECK(m.b == mix(l.b, c.b));
    }
  }
}

TEST_CASE("plateau rim is seamless with the context") {
  TempDir dir;
  const auto ds = gradient_dataset(dir.path(), 256, 256);
  const RegionRect vp{0, 0, 0, 256, 256};
  const ChannelSet ctx = set_of({{"a", {255, 255, 255}, 0, 4000}});
  LensState lens;
  lens.geometry = LensGeometry::circle(128, 128, 60);
  lens.magnifier = Magnifier::kPlateau;
  lens.mag_factor = 2.0;
  lens.lens_channel_set = ctx;
  const RgbaPlane base = render_viewport(*ds, vp, ctx, std::nullopt);
  const RgbaPlane out = render_viewport(*ds, vp, ctx, lens);
  int ring = 0;
  for (int y = 0; y < 256; ++y) {
    for (int x = 0; x < 256; ++x) {
      const double d = std::hypot(x + 0.5 - 128, y + 0.5 - 128);
      if (d > 60 || d < 59) continue;
      ++ring;
      // One source pixel of drift on a gradient of at most 13 counts/px.
      CHECK(std::abs(out.at(x, y).r - base.at(x, y).r) <= 2);
    }
  }
  CHECK(ring > 100);
  // The core is magnified, so it differs from the context.
  CHECK(out.at(128 + 30, 128) != base.at(128 + 30, 128));
}

TEST_CASE("split screen juxtaposes without overlap") {
  TempDir dir;
  const auto ds = gradient_dataset(dir.path(), 320, 200);
  const RegionRect vp{0, 0, 0, 320, 200};
  const ChannelSet ctx = set_of({{"a", {255, 0, 0}, 0, 3000}});
  LensState lens;
  lens.mode = LensMode::kSplitScreen;
  lens.geometry = LensGeometry::circle(100, 100, 30);
  lens.lens_channel_set = ctx;
  SplitScreen s = split_screen(*ds, vp, ctx, lens);
  CHECK(s.lens.pixels == s.context.pixels);
  CHECK((s.context.x0 >= s.lens.x1() || s.context.x1() <= s.lens.x0));

  // Different sets: B equals the context render of the same samples.
  lens.lens_channel_set = set_of({{"b", {0, 255, 0}, 2000, 4500}});
  s = split_screen(*ds, vp, ctx, lens);
  const RgbaPlane base = render_viewport(*ds, vp, ctx, std::nullopt);
  for (int y = 0; y < s.context.pixels.height; ++y) {
    for (int x = 0; x < s.context.pixels.width; ++x) {
      const Rgba& b = s.context.pixels.at(x, y);
      if (!b.a) continue;
      CHECK(b == base.at(s.lens.x0 + x, s.lens.y0 + y));
    }
  }
  // Near the right edge B flips to the left.
  lens.geometry = LensGeometry::circle(300, 100, 30);
  s = split_screen(*ds, vp, ctx, lens);
  CHECK(s.context.x1() <= s.lens.x0);
}

TEST_CASE("cell type lens overlays boundaries") {
  TempDir dir;
  SyntheticParams p;
  p.width = 200;
  p.height = 200;
  p.n_cells = 20;
  p.tile_size = 64;
  generate_synthetic(dir.path(), p);
  const auto ds = Dataset::open(dir.path());
  const RegionRect vp{0, 0, 0, 200, 200};
  const ChannelSet ctx = set_of({{"ch0", {255, 255, 255}, 0, 4000}});
  LensState lens;
  lens.mode = LensMode::kCellType;
  lens.geometry = LensGeometry::circle(100, 100, 99);
  lens.lens_channel_set = ctx;
  CellTypeMap types;
  for (std::uint32_t i = 1; i <= 20; ++i) types[i] = "T cell";
  const CellOverlay overlay{&types, TypePalette::for_types({"T cell"})};
  const RgbaPlane with = render_viewport(*ds, vp, ctx, lens, &overlay);
  const RgbaPlane without = render_viewport(*ds, vp, ctx, lens, nullptr);
  const PlaneU32 mask = ds->read_mask_region(vp);
  const RgbaPlane edges = render_cell_boundaries(mask, types, overlay.palette);
  for (int y = 0; y < 200; ++y) {
    for (int x = 0; x < 200; ++x) {
      const bool interior = lens.geometry.contains({x - 0.5, y + 0.5}) &&
                            lens.geometry.contains({x + 1.5, y + 0.5}) &&
                            lens.geometry.contains({x + 0.5, y - 0.5}) &&
                            lens.geometry.contains({x + 0.5, y + 1.5});
      if (!interior) continue;
      if (edges.at(x, y).a) {
        const Rgb c = overlay.palette.colors.at("T cell");
        CHECK(Rgb{with.at(x, y).r, with.at(x, y).g, with.at(x, y).b} == c);
      } else {
        CHECK(with.at(x, y) == without.at(x, y));
      }
    }
  }
}

TEST_CASE("scale ticks") {
  const LensGeometry g = LensGeometry::circle(0, 0, 500);
  const ScaleAxis a = lens_scale_ticks(g, 0.325, 1.0);
  CHECK(a.extent_um == doctest::Approx(325.0));
  CHECK(a.step_um == doctest::Approx(100.0));
  REQUIRE(a.ticks.size() == 4);
  CHECK(a.ticks[3].microns == doctest::Approx(300.0));
  CHECK(a.ticks[3].screen_offset == doctest::Approx(300.0 / 0.325));
  const ScaleAxis b = lens_scale_ticks(g, 0.325, 2.0);
  REQUIRE(b.ticks.size() == a.ticks.size());
  for (std::size_t i = 0; i < a.ticks.size(); ++i) {
    CHECK(b.ticks[i].microns == a.ticks[i].microns);
    CHECK(b.ticks[i].screen_offset == doctest::Approx(2.0 * a.ticks[i].screen_offset));
  }
  CHECK(px_to_um(1000, 0.325) == doctest::Approx(325.0));
  CHECK_THROWS_AS(lens_scale_ticks(g, 0.325, 0.0), Error);
  CHECK_THROWS_AS(lens_scale_ticks(g, 0.0, 1.0), Error);
}

}  // TEST_SUITE
