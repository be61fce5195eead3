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

#include <string_view>
#include <vector>

#include "tissuelens/color.hpp"
#include "tissuelens/geometry.hpp"

namespace tissuelens {

enum class LensMode {
  kMagnify,
  kSingleChannel,
  kMultiChannel,
  kSplitScreen,
  kHistogram,
  kRadial,
  kCellType,
  kSearch,
};

enum class Magnifier { kNone, kNormal, kFisheye, kPlateau };

std::string_view to_string(LensMode mode);
std::string_view to_string(Magnifier magnifier);
LensMode parse_lens_mode(std::string_view text);
Magnifier parse_magnifier(std::string_view text);

constexpr double kDefaultPlateauFraction = 0.75;

struct LensState {
  LensGeometry geometry;
  LensMode mode = LensMode::kMagnify;
  Magnifier magnifier = Magnifier::kNone;
  double mag_factor = 1.0;
  double plateau_fraction = kDefaultPlateauFraction;
  ChannelSet lens_channel_set;
  double blend_alpha = 1.0;

  /// Magnification actually applied (1 for kNone).
  double effective_magnification() const {
    return magnifier == Magnifier::kNone ? 1.0 : mag_factor;
  }

  /// mag_factor >= 1, plateau_fraction in (0,1], blend_alpha in [0,1],
  /// distortion only on circles, valid geometry and channel set.
  void validate() const;
  friend bool operator==(const LensState&, const LensState&) = default;
};

/// Radial source distance s for a lens point at normalised radius rho in
/// [0,1] of a lens with radius R:
///   none     s = rho R
///   normal   s = rho R / m
///   fisheye  s = rho R / (m - (m - 1) rho)
///   plateau  s = rho R / m for rho <= f, then linear from f R / m to R.
double source_radius(double rho, double radius, Magnifier magnifier, double m,
                     double plateau_fraction);

/// Maps a displayed point inside the lens to the image point it shows:
/// center + s * unit(p - center). Rectangles only support kNone (identity).
/// Throws kInvalidArgument for points outside the lens.
Point lens_source_coord(Point p, const LensGeometry& geometry, Magnifier magnifier,
                        double m, double plateau_fraction);

struct ScaleTick {
  double screen_offset = 0.0;  // screen pixels from the lens' left edge
  double microns = 0.0;
};

struct ScaleAxis {
  double step_um = 0.0;
  double extent_um = 0.0;  // full lens width in microns
  std::vector<ScaleTick> ticks;
};

/// Level-0 pixel distance to microns.
double px_to_um(double level0_px, double pixel_size_um);

/// Ticks along the lens' horizontal extent at round steps of {1,2,5}x10^k
/// microns (about five ticks). `zoom` is screen pixels per level-0 pixel;
/// each tick's label equals screen_offset / zoom * pixel_size_um.
ScaleAxis lens_scale_ticks(const LensGeometry& geometry, double pixel_size_um, double zoom);

}  // namespace tissuelens
