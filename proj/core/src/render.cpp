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

#include "tissuelens/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tissuelens/error.hpp"

namespace tissuelens {

namespace {

constexpr int kSplitGap = 4;

double level_scale(int level) { return std::ldexp(1.0, level); }

RgbaPlane to_rgba(const RgbPlane& rgb) {
  RgbaPlane out(rgb.width, rgb.height);
  for (std::size_t i = 0; i < rgb.data.size(); ++i) {
    out.data[i] = {rgb.data[i].r, rgb.data[i].g, rgb.data[i].b, 255};
  }
  return out;
}

/// Screen-space bounding box of the lens at `level`, in level pixel coords.
struct Box {
  int x0, y0, x1, y1;  // inclusive-exclusive
};

Box lens_screen_box(const LensGeometry& g, int level) {
  const double s = level_scale(level);
  const double ex = g.extent_x(), ey = g.extent_y();
  return {static_cast<int>(std::floor((g.center.x - ex) / s - 0.5)),
          static_cast<int>(std::floor((g.center.y - ey) / s - 0.5)),
          static_cast<int>(std::ceil((g.center.x + ex) / s - 0.5)) + 1,
          static_cast<int>(std::ceil((g.center.y + ey) / s - 0.5)) + 1};
}

/// Region of `level` covering the lens' source footprint, clipped; nullopt
/// when it misses the image.
std::optional<RegionRect> source_region(const DatasetMeta& meta, const LensGeometry& g,
                                        int level) {
  const double s = level_scale(level);
  const LevelDims d = meta.level_dims(level);
  RegionRect r{level,
               std::max(0, static_cast<int>(std::floor((g.center.x - g.extent_x()) / s)) - 1),
               std::max(0, static_cast<int>(std::floor((g.center.y - g.extent_y()) / s)) - 1),
               std::min(d.width, static_cast<int>(std::ceil((g.center.x + g.extent_x()) / s)) + 1),
               std::min(d.height, static_cast<int>(std::ceil((g.center.y + g.extent_y()) / s)) + 1)};
  if (r.x0 >= r.x1 || r.y0 >= r.y1) return std::nullopt;
  return r;
}

struct LensSampling {
  Box box;                      // level pixel coords of the patch
  RegionRect source;            // region read at the source level
  std::vector<std::int64_t> index;  // per patch pixel: offset into source, -1 = none
};

LensSampling plan_sampling(const Dataset& dataset, int viewport_level, const LensState& lens) {
  const DatasetMeta& meta = dataset.meta();
  const double m = lens.effective_magnification();
  const int src_level = lens_source_level(viewport_level, m);
  LensSampling plan;
  plan.box = lens_screen_box(lens.geometry, viewport_level);
  const int w = plan.box.x1 - plan.box.x0, h = plan.box.y1 - plan.box.y0;
  plan.index.assign(static_cast<std::size_t>(w) * h, -1);
  const LevelDims vd = meta.level_dims(viewport_level);
  auto src = source_region(meta, lens.geometry, src_level);
  if (!src) return plan;
  plan.source = *src;
  const double src_scale = level_scale(src_level);
  for (int y = 0; y < h; ++y) {
    const int ly = plan.box.y0 + y;
    if (ly < 0 || ly >= vd.height) continue;
    for (int x = 0; x < w; ++x) {
      const int lx = plan.box.x0 + x;
      if (lx < 0 || lx >= vd.width) continue;
      const Point p = level_pixel_center(viewport_level, lx, ly);
      if (!lens.geometry.contains(p)) continue;
      const Point s =
          lens_source_coord(p, lens.geometry, lens.magnifier, m, lens.plateau_fraction);
      const int sx = static_cast<int>(std::floor(s.x / src_scale));
      const int sy = static_cast<int>(std::floor(s.y / src_scale));
      if (sx < plan.source.x0 || sx >= plan.source.x1 || sy < plan.source.y0 ||
          sy >= plan.source.y1) {
        continue;
      }
      plan.index[static_cast<std::size_t>(y) * w + x] =
          static_cast<std::int64_t>(sy - plan.source.y0) * plan.source.width() +
          (sx - plan.source.x0);
    }
  }
  return plan;
}

template <typename T>
Plane<T> gather(const Plane<T>& source, const LensSampling& plan, int w, int h) {
  Plane<T> out(w, h);
  for (std::size_t i = 0; i < plan.index.size(); ++i) {
    if (plan.index[i] >= 0) out.data[i] = source.data[static_cast<std::size_t>(plan.index[i])];
  }
  return out;
}

}  // namespace

Rgb TypePalette::color_for(const std::string* type) const {
  if (!type) return fallback;
  auto it = colors.find(*type);
  return it == colors.end() ? fallback : it->second;
}

TypePalette TypePalette::for_types(const std::vector<std::string>& types) {
  static constexpr std::array<Rgb, 10> kColors = {{{31, 119, 180},
                                                    {255, 127, 14},
                                                    {44, 160, 44},
                                                    {214, 39, 40},
                                                    {148, 103, 189},
                                                    {140, 86, 75},
                                                    {227, 119, 194},
                                                    {188, 189, 34},
                                                    {23, 190, 207},
                                                    {255, 187, 120}}};
  TypePalette palette;
  for (std::size_t i = 0; i < types.size(); ++i) {
    palette.colors.emplace(types[i], kColors[i % kColors.size()]);
  }
  return palette;
}

RgbaPlane render_cell_boundaries(const PlaneU32& mask, const CellTypeMap& cell_types,
                                 const TypePalette& palette) {
  RgbaPlane out(mask.width, mask.height, Rgba{0, 0, 0, 0});
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const std::uint32_t id = mask.at(x, y);
      if (id == 0) continue;
      const bool edge = (x > 0 && mask.at(x - 1, y) != id) ||
                        (x + 1 < mask.width && mask.at(x + 1, y) != id) ||
                        (y > 0 && mask.at(x, y - 1) != id) ||
                        (y + 1 < mask.height && mask.at(x, y + 1) != id);
      if (!edge) continue;
      auto it = cell_types.find(id);
      const Rgb c = palette.color_for(it == cell_types.end() ? nullptr : &it->second);
      out.at(x, y) = {c.r, c.g, c.b, 255};
    }
  }
  return out;
}

Point level_pixel_center(int level, int x, int y) {
  const double s = level_scale(level);
  return {(x + 0.5) * s, (y + 0.5) * s};
}

RgbaPlane render_context(const Dataset& dataset, const RegionRect& viewport,
                         const ChannelSet& set) {
  dataset.check_region(viewport);
  set.validate();
  if (set.settings.empty()) {
    return RgbaPlane(viewport.width(), viewport.height(), Rgba{0, 0, 0, 255});
  }
  std::vector<PlaneU16> planes;
  for (const auto& s : set.settings) planes.push_back(dataset.read_region(s.channel, viewport));
  return to_rgba(composite(planes, set));
}

int lens_source_level(int viewport_level, double magnification) {
  const double target = viewport_level - std::log2(magnification);
  return std::clamp(static_cast<int>(std::floor(target + 1e-9)), 0, viewport_level);
}

LensPatch render_lens_with(const Dataset& dataset, const RegionRect& viewport,
                           const ChannelSet& context, const LensState& lens,
                           const ChannelSet& channel_set, const CellOverlay* overlay) {
  dataset.check_region(viewport);
  lens.validate();
  channel_set.validate();
  const LensSampling plan = plan_sampling(dataset, viewport.level, lens);
  const int w = plan.box.x1 - plan.box.x0, h = plan.box.y1 - plan.box.y0;

  LensPatch patch{plan.box.x0 - viewport.x0, plan.box.y0 - viewport.y0,
                  RgbaPlane(w, h, Rgba{0, 0, 0, 0})};
  const bool any = std::any_of(plan.index.begin(), plan.index.end(),
                               [](std::int64_t i) { return i >= 0; });
  if (!any) return patch;

  // Lens colors from sampled source pixels.
  RgbPlane lens_rgb(w, h);
  if (!channel_set.settings.empty()) {
    std::vector<PlaneU16> sampled;
    for (const auto& s : channel_set.settings) {
      sampled.push_back(gather(dataset.read_region(s.channel, plan.source), plan, w, h));
    }
    lens_rgb = composite(sampled, channel_set);
  }
  if (overlay && overlay->cell_types && lens.mode == LensMode::kCellType &&
      dataset.meta().has_mask) {
    PlaneU32 mask = gather(dataset.read_mask_region(plan.source), plan, w, h);
    for (std::size_t i = 0; i < plan.index.size(); ++i) {
      if (plan.index[i] < 0) mask.data[i] = 0;
    }
    const RgbaPlane edges = render_cell_boundaries(mask, *overlay->cell_types, overlay->palette);
    for (std::size_t i = 0; i < edges.data.size(); ++i) {
      if (edges.data[i].a) lens_rgb.data[i] = {edges.data[i].r, edges.data[i].g, edges.data[i].b};
    }
  }

  // Context under the patch, clipped to the level.
  const LevelDims vd = dataset.meta().level_dims(viewport.level);
  const RegionRect under{viewport.level, std::max(0, plan.box.x0), std::max(0, plan.box.y0),
                         std::min(vd.width, plan.box.x1), std::min(vd.height, plan.box.y1)};
  const RgbaPlane ctx = render_context(dataset, under, context);

  const double a = lens.blend_alpha;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (plan.index[i] < 0) continue;
      const Rgba& c = ctx.at(plan.box.x0 + x - under.x0, plan.box.y0 + y - under.y0);
      const Rgb& l = lens_rgb.data[i];
      auto mix = [a](std::uint8_t lv, std::uint8_t cv) {
        return static_cast<std::uint8_t>(std::floor(a * lv + (1.0 - a) * cv + 0.5));
      };
      patch.pixels.data[i] = {mix(l.r, c.r), mix(l.g, c.g), mix(l.b, c.b), 255};
    }
  }
  return patch;
}

LensPatch render_lens(const Dataset& dataset, const RegionRect& viewport,
                      const ChannelSet& context, const LensState& lens,
                      const CellOverlay* overlay) {
  return render_lens_with(dataset, viewport, context, lens, lens.lens_channel_set, overlay);
}

SplitScreen split_screen(const Dataset& dataset, const RegionRect& viewport,
                         const ChannelSet& context, const LensState& lens) {
  SplitScreen out;
  out.lens = render_lens(dataset, viewport, context, lens);
  LensState plain = lens;
  plain.blend_alpha = 1.0;
  out.context = render_lens_with(dataset, viewport, context, plain, context, nullptr);
  const int w = out.lens.pixels.width;
  if (out.lens.x1() + kSplitGap + w <= viewport.width()) {
    out.context.x0 = out.lens.x1() + kSplitGap;
  } else {
    out.context.x0 = out.lens.x0 - kSplitGap - w;
  }
  out.context.y0 = out.lens.y0;
  return out;
}

void paste_patch(RgbaPlane& target, const LensPatch& patch) {
  for (int y = std::max(0, patch.y0); y < std::min(target.height, patch.y1()); ++y) {
    for (int x = std::max(0, patch.x0); x < std::min(target.width, patch.x1()); ++x) {
      const Rgba& p = patch.pixels.at(x - patch.x0, y - patch.y0);
      if (p.a) target.at(x, y) = p;
    }
  }
}

RgbaPlane render_viewport(const Dataset& dataset, const RegionRect& viewport,
                          const ChannelSet& context, const std::optional<LensState>& lens,
                          const CellOverlay* overlay) {
  RgbaPlane out = render_context(dataset, viewport, context);
  if (!lens) return out;
  if (lens->mode == LensMode::kSplitScreen) {
    const SplitScreen split = split_screen(dataset, viewport, context, *lens);
    paste_patch(out, split.lens);
    paste_patch(out, split.context);
  } else {
    paste_patch(out, render_lens(dataset, viewport, context, *lens, overlay));
  }
  return out;
}

}  // namespace tissuelens
