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

#include "tissuelens/geometry.hpp"

#include <string>

#include "tissuelens/error.hpp"

namespace tissuelens {

std::string_view to_string(LensShape shape) {
  return shape == LensShape::kCircle ? "circle" : "rectangle";
}

LensShape parse_lens_shape(std::string_view text) {
  if (text == "circle") return LensShape::kCircle;
  if (text == "rectangle" || text == "rect") return LensShape::kRectangle;
  fail(ErrorKind::kInvalidArgument, "unknown lens shape '" + std::string(text) + "'",
       "shape");
}

void LensGeometry::validate(bool allow_zero) const {
  auto check = [&](double v, const char* field) {
    if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
      fail(ErrorKind::kInvalidArgument,
           std::string("lens ") + field + " must be " +
               (allow_zero ? "non-negative" : "positive"),
           field);
    }
  };
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) {
    fail(ErrorKind::kInvalidArgument, "lens center must be finite", "center");
  }
  if (shape == LensShape::kCircle) {
    check(radius, "radius");
  } else {
    check(half_w, "half_w");
    check(half_h, "half_h");
  }
}

}  // namespace tissuelens
