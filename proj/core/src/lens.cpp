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

#include "tissuelens/lens.hpp"

#include <cmath>
#include <string>

#include "tissuelens/error.hpp"

namespace tissuelens {

std::string_view to_string(LensMode mode) {
  switch (mode) {
    case LensMode::kMagnify: return "magnify";
    case LensMode::kSingleChannel: return "single_channel";
    case LensMode::kMultiChannel: return "multi_channel";
    case LensMode::kSplitScreen: return "split_screen";
    case LensMode::kHistogram: return "histogram";
    case LensMode::kRadial: return "radial";
    case LensMode::kCellType: return "cell_type";
    case LensMode::kSearch: return "search";
  }
  return "magnify";
}

std::string_view to_string(Magnifier magnifier) {
  switch (magnifier) {
    case Magnifier::kNone: return "none";
    case Magnifier::kNormal: return "normal";
    case Magnifier::kFisheye: return "fisheye";
    case Magnifier::kPlateau: return "plateau";
  }
  return "none";
}

LensMode parse_lens_mode(std::string_view text) {
  for (auto m : {LensMode::kMagnify, LensMode::kSingleChannel, LensMode::kMultiChannel,
                 LensMode::kSplitScreen, LensMode::kHistogram, LensMode::kRadial,
                 LensMode::kCellType, LensMode::kSearch}) {
    if (to_string(m) == text) return m;
  }
  fail(ErrorKind::kInvalidArgument, "unknown lens mode '" + std::string(text) + "'", "mode");
}

Magnifier parse_magnifier(std::string_view text) {
  for (auto m : {Magnifier::kNone, Magnifier::kNormal, Magnifier::kFisheye, Magnifier::kPlateau}) {
    if (to_string(m) == text) return m;
  }
  fail(ErrorKind::kInvalidArgument, "unknown magnifier '" + std::string(text) + "'",
       "magnifier");
}

void LensState::validate() const {
  geometry.validate();
  if (!(mag_factor >= 1.0) || !std::isfinite(mag_factor)) {
    fail(ErrorKind::kInvalidArgument, "mag_factor must be >= 1", "mag_factor");
  }
  if (!(plateau_fraction > 0.0 && plateau_fraction <= 1.0)) {
    fail(ErrorKind::kInvalidArgument, "plateau_fraction must be in (0, 1]", "plateau_fraction");
  }
  if (!(blend_alpha >= 0.0 && blend_alpha <= 1.0)) {
    fail(ErrorKind::kInvalidArgument, "blend_alpha must be in [0, 1]", "blend_alpha");
  }
  if (geometry.shape == LensShape::kRectangle && magnifier != Magnifier::kNone) {
    fail(ErrorKind::kInvalidArgument, "rectangular lenses only support magnifier 'none'",
         "magnifier");
  }
  lens_channel_set.validate();
}

double source_radius(double rho, double radius, Magnifier magnifier, double m,
                     double plateau_fraction) {
  switch (magnifier) {
    case Magnifier::kNone:
      return rho * radius;
    case Magnifier::kNormal:
      return rho * radius / m;
    case Magnifier::kFisheye:
      return rho * radius / (m - (m - 1.0) * rho);
    case Magnifier::kPlateau: {
      const double f = plateau_fraction;
      if (rho <= f) return rho * radius / m;
      const double inner = f * radius / m;
      return inner + (rho - f) / (1.0 - f) * (radius - inner);
    }
  }
  return rho * radius;
}

Point lens_source_coord(Point p, const LensGeometry& g, Magnifier magnifier, double m,
                        double plateau_fraction) {
  if (!g.contains(p)) {
    fail(ErrorKind::kInvalidArgument, "point lies outside the lens", "point");
  }
  if (!(m >= 1.0)) fail(ErrorKind::kInvalidArgument, "mag_factor must be >= 1", "mag_factor");
  if (g.shape == LensShape::kRectangle) {
    if (magnifier != Magnifier::kNone) {
      fail(ErrorKind::kInvalidArgument, "rectangular lenses only support magnifier 'none'",
           "magnifier");
    }
    return p;
  }
  const double dx = p.x - g.center.x, dy = p.y - g.center.y;
  const double dist = std::hypot(dx, dy);
  if (dist == 0.0) return g.center;
  const double rho = std::min(1.0, dist / g.radius);
  const double s = source_radius(rho, g.radius, magnifier, m, plateau_fraction);
  return {g.center.x + s * dx / dist, g.center.y + s * dy / dist};
}

double px_to_um(double level0_px, double pixel_size_um) { return level0_px * pixel_size_um; }

ScaleAxis lens_scale_ticks(const LensGeometry& g, double pixel_size_um, double zoom) {
  if (!(pixel_size_um > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "pixel_size_um must be positive", "pixel_size_um");
  }
  if (!(zoom > 0.0) || !std::isfinite(zoom)) {
    fail(ErrorKind::kInvalidArgument, "zoom must be positive", "zoom");
  }
  g.validate();
  ScaleAxis axis;
  const double width_px = 2.0 * g.extent_x();
  axis.extent_um = px_to_um(width_px, pixel_size_um);
  const double raw = axis.extent_um / 5.0;
  double step = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mult * step >= raw * (1.0 - 1e-12)) {
      step *= mult;
      break;
    }
  }
  axis.step_um = step;
  for (int k = 0;; ++k) {
    const double um = k * step;
    if (um > axis.extent_um * (1.0 + 1e-12)) break;
    axis.ticks.push_back({um / pixel_size_um * zoom, um});
  }
  return axis;
}

}  // namespace tissuelens
