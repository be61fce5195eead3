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

#include "tissuelens/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "tissuelens/error.hpp"
#include "tissuelens/plane_io.hpp"
#include "tissuelens/pyramid.hpp"

namespace tissuelens {

namespace fs = std::filesystem;

namespace {

constexpr std::array<const char*, 5> kCellTypes = {"B cell", "T cell", "Tumor", "Stroma",
                                                   "Macrophage"};

struct Square {
  double x0, y0, x1, y1;
};

/// Bucket grid over cell disks for overlap rejection.
class DiskGrid {
 public:
  DiskGrid(int w, int h, double cell) : cell_(cell) {
    nx_ = std::max(1, static_cast<int>(std::ceil(w / cell)));
    ny_ = std::max(1, static_cast<int>(std::ceil(h / cell)));
    buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  }

  bool overlaps(double x, double y, double r, double gap) const {
    const int bx = bucket(x, nx_), by = bucket(y, ny_);
    for (int j = std::max(0, by - 2); j <= std::min(ny_ - 1, by + 2); ++j) {
      for (int i = std::max(0, bx - 2); i <= std::min(nx_ - 1, bx + 2); ++i) {
        for (const auto& d : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
          const double dx = d[0] - x, dy = d[1] - y, lim = d[2] + r + gap;
          if (dx * dx + dy * dy < lim * lim) return true;
        }
      }
    }
    return false;
  }

  void insert(double x, double y, double r) {
    buckets_[static_cast<std::size_t>(bucket(y, ny_)) * nx_ + bucket(x, nx_)].push_back({x, y, r});
  }

 private:
  int bucket(double v, int n) const {
    return std::clamp(static_cast<int>(v / cell_), 0, n - 1);
  }
  double cell_;
  int nx_, ny_;
  std::vector<std::vector<std::array<double, 3>>> buckets_;
};

}  // namespace

std::vector<double> mask_means(const PlaneU16& plane, const PlaneU32& mask,
                               std::uint32_t max_id) {
  std::vector<std::uint64_t> sum(max_id + 1, 0), count(max_id + 1, 0);
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    const std::uint32_t id = mask.data[i];
    if (id == 0 || id > max_id) continue;
    sum[id] += plane.data[i];
    ++count[id];
  }
  std::vector<double> means(max_id + 1, 0.0);
  for (std::uint32_t id = 1; id <= max_id; ++id) {
    if (count[id]) means[id] = static_cast<double>(sum[id]) / static_cast<double>(count[id]);
  }
  return means;
}

SyntheticData make_synthetic(const SyntheticParams& p) {
  if (p.width <= 0 || p.height <= 0 || p.n_channels <= 0) {
    fail(ErrorKind::kInvalidArgument, "width, height and channel count must be positive");
  }
  if (p.n_cells < 0 || p.n_patterns < 0) {
    fail(ErrorKind::kInvalidArgument, "cell and pattern counts must be non-negative");
  }
  if (!(p.cell_radius_min > 0) || p.cell_radius_max < p.cell_radius_min) {
    fail(ErrorKind::kInvalidArgument, "invalid cell radius range");
  }
  const double mean_r = 0.5 * (p.cell_radius_min + p.cell_radius_max);
  const double cell_area = p.n_cells * M_PI * (mean_r + 1) * (mean_r + 1);
  const double side = 2.0 * p.pattern_half_size + 1;
  const double pattern_area = p.n_patterns * side * side;
  if (cell_area + pattern_area > 0.5 * static_cast<double>(p.width) * p.height) {
    fail(ErrorKind::kInvalidArgument,
         "infeasible density: requested cells and patterns cover more than half the image");
  }

  std::mt19937_64 rng(p.seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  SyntheticData out;
  out.manifest.seed = p.seed;
  DatasetMeta& meta = out.meta;
  meta.width_px = p.width;
  meta.height_px = p.height;
  meta.pixel_size_um = p.pixel_size_um;
  meta.tile_size = p.tile_size;
  meta.levels = pyramid_level_count(p.width, p.height, p.tile_size);
  meta.has_mask = true;
  for (int c = 0; c < p.n_channels; ++c) {
    meta.channels.push_back({"ch" + std::to_string(c), std::string("CyCIF")});
  }
  meta.validate();

  // Background noise.
  out.planes.assign(static_cast<std::size_t>(p.n_channels), PlaneU16(p.width, p.height));
  for (auto& plane : out.planes) {
    std::uniform_int_distribution<int> noise(-p.noise_amplitude, p.noise_amplitude);
    for (auto& v : plane.data) {
      v = static_cast<std::uint16_t>(std::clamp(p.background_level + noise(rng), 0, 65535));
    }
  }
  out.mask = PlaneU32(p.width, p.height, 0);

  // Planted patterns: copies of one texture, clear of each other and of the
  // border by a full patch so search windows around them stay valid.
  const int h = p.pattern_half_size;
  std::vector<Square> keepout;
  if (p.n_patterns > 0) {
    const int margin = 2 * h + 1;
    if (p.width <= 2 * margin || p.height <= 2 * margin) {
      fail(ErrorKind::kInvalidArgument, "infeasible density: image too small for patterns");
    }
    const int tside = 2 * h + 1;
    std::vector<PlaneU16> texture(static_cast<std::size_t>(p.n_channels), PlaneU16(tside, tside));
    constexpr int kBlock = 4;
    for (auto& t : texture) {
      const int nb = (tside + kBlock - 1) / kBlock;
      std::vector<int> block_level(static_cast<std::size_t>(nb) * nb);
      for (auto& b : block_level) b = static_cast<int>(uniform(1200.0, 3600.0));
      for (int y = 0; y < tside; ++y) {
        for (int x = 0; x < tside; ++x) {
          const int base = block_level[static_cast<std::size_t>(y / kBlock) * nb + x / kBlock];
          t.at(x, y) = static_cast<std::uint16_t>(base + static_cast<int>(uniform(-150.0, 150.0)));
        }
      }
    }
    int attempts = 0;
    while (static_cast<int>(out.manifest.patterns.size()) < p.n_patterns) {
      if (++attempts > 10000) {
        fail(ErrorKind::kInvalidArgument, "infeasible density: cannot place all patterns");
      }
      const int cx = static_cast<int>(uniform(margin, p.width - margin));
      const int cy = static_cast<int>(uniform(margin, p.height - margin));
      bool clash = false;
      for (const auto& q : out.manifest.patterns) {
        if (std::abs(q.cx - cx) < 3 * tside && std::abs(q.cy - cy) < 3 * tside) clash = true;
      }
      if (clash) continue;
      out.manifest.patterns.push_back({cx, cy, h});
      for (int c = 0; c < p.n_channels; ++c) {
        for (int y = 0; y < tside; ++y) {
          for (int x = 0; x < tside; ++x) {
            out.planes[static_cast<std::size_t>(c)].at(cx - h + x, cy - h + y) =
                texture[static_cast<std::size_t>(c)].at(x, y);
          }
        }
      }
      keepout.push_back({cx - h - 2.0, cy - h - 2.0, cx + h + 2.0, cy + h + 2.0});
    }
  }

  // Cells.
  DiskGrid grid(p.width, p.height, 2.0 * p.cell_radius_max + 2.0);
  const long max_attempts = 200L * p.n_cells + 1000;
  long attempts = 0;
  while (static_cast<int>(out.manifest.cells.size()) < p.n_cells) {
    if (++attempts > max_attempts) {
      fail(ErrorKind::kInvalidArgument, "infeasible density: placed " +
                                            std::to_string(out.manifest.cells.size()) + " of " +
                                            std::to_string(p.n_cells) + " cells");
    }
    const double r = uniform(p.cell_radius_min, p.cell_radius_max);
    if (2 * r + 2 >= p.width || 2 * r + 2 >= p.height) {
      fail(ErrorKind::kInvalidArgument, "infeasible density: cells larger than the image");
    }
    const double cx = uniform(r + 1, p.width - r - 1);
    const double cy = uniform(r + 1, p.height - r - 1);
    bool clash = grid.overlaps(cx, cy, r, 1.0);
    for (const auto& k : keepout) {
      if (cx + r >= k.x0 && cx - r <= k.x1 && cy + r >= k.y0 && cy - r <= k.y1) clash = true;
    }
    if (clash) continue;
    grid.insert(cx, cy, r);
    const auto id = static_cast<std::uint32_t>(out.manifest.cells.size() + 1);
    const std::string type =
        kCellTypes[std::uniform_int_distribution<std::size_t>(0, kCellTypes.size() - 1)(rng)];
    out.manifest.cells.push_back({id, cx, cy, r, type});

    const double sigma = r / 2.0;
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - r - 2)));
    const int x1 = std::min(p.width - 1, static_cast<int>(std::ceil(cx + r + 2)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - r - 2)));
    const int y1 = std::min(p.height - 1, static_cast<int>(std::ceil(cy + r + 2)));
    for (int c = 0; c < p.n_channels; ++c) {
      double amp = uniform(800.0, 3000.0);
      if (uniform(0.0, 1.0) < 0.5) amp *= 0.1;  // marker-negative cell
      auto& plane = out.planes[static_cast<std::size_t>(c)];
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double dx = x - cx, dy = y - cy;
          const double d2 = dx * dx + dy * dy;
          if (d2 > (r + 2) * (r + 2)) continue;
          const double v = plane.at(x, y) + amp * std::exp(-d2 / (2 * sigma * sigma));
          plane.at(x, y) = static_cast<std::uint16_t>(std::min(65535.0, std::floor(v)));
        }
      }
    }
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - cx, dy = y - cy;
        if (dx * dx + dy * dy <= r * r) out.mask.at(x, y) = id;
      }
    }
  }

  // cells.csv from the emitted planes.
  const auto n = static_cast<std::uint32_t>(out.manifest.cells.size());
  std::vector<std::vector<double>> means;
  for (const auto& plane : out.planes) means.push_back(mask_means(plane, out.mask, n));
  out.cells.has_type = true;
  for (const auto& c : meta.channels) out.cells.channels.push_back(c.name);
  for (const auto& cell : out.manifest.cells) {
    CellRow row{cell.id, cell.cx, cell.cy, {}, cell.type};
    for (const auto& m : means) row.means.push_back(m[cell.id]);
    out.cells.rows.push_back(std::move(row));
  }
  return out;
}

void write_synthetic(const fs::path& dir, const SyntheticData& data) {
  build_pyramid(dir, data.meta, data.planes, &data.mask);
  write_cells_csv(dir / "cells.csv", data.cells);
  write_text_file_atomic(dir / "manifest.json", to_json(data.manifest).dump(2) + "\n");
}

fs::path generate_synthetic(const fs::path& dir, const SyntheticParams& params) {
  write_synthetic(dir, make_synthetic(params));
  return dir / "manifest.json";
}

nlohmann::json to_json(const SyntheticManifest& m) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : m.cells) {
    cells.push_back({{"id", c.id}, {"cx", c.cx}, {"cy", c.cy}, {"radius", c.radius}, {"type", c.type}});
  }
  nlohmann::json patterns = nlohmann::json::array();
  for (const auto& q : m.patterns) {
    patterns.push_back({{"cx", q.cx}, {"cy", q.cy}, {"half_size", q.half_size}});
  }
  return {{"seed", m.seed}, {"cells", std::move(cells)}, {"patterns", std::move(patterns)}};
}

SyntheticManifest manifest_from_json(const nlohmann::json& j) {
  SyntheticManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& c : j.at("cells")) {
    m.cells.push_back({c.at("id").get<std::uint32_t>(), c.at("cx").get<double>(),
                       c.at("cy").get<double>(), c.at("radius").get<double>(),
                       c.at("type").get<std::string>()});
  }
  for (const auto& q : j.at("patterns")) {
    m.patterns.push_back({q.at("cx").get<int>(), q.at("cy").get<int>(), q.at("half_size").get<int>()});
  }
  return m;
}

}  // namespace tissuelens
