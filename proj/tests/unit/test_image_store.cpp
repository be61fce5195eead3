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
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "test_support.hpp"
#include "tissuelens/csv.hpp"
#include "tissuelens/dataset.hpp"
#include "tissuelens/error.hpp"
#include "tissuelens/ingest.hpp"
#include "tissuelens/plane_io.hpp"
#include "tissuelens/pyramid.hpp"
#include "tissuelens/synthetic.hpp"
#include "tissuelens/tiff.hpp"

using namespace tissuelens;
using tissuelens::testing::TempDir;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an engine error");
  return ErrorKind::kIo;
}

std::string error_text(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return std::string(e.what()) + " | " + e.detail();
  }
  return {};
}

// Naive 2x2 reference: rounded-half-up mean of the pixels present.
PlaneU16 mean_oracle(const PlaneU16& p) {
  PlaneU16 out((p.width + 1) / 2, (p.height + 1) / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      double sum = 0;
      int n = 0;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          const int sx = 2 * x + dx, sy = 2 * y + dy;
          if (sx < p.width && sy < p.height) {
            sum += p.at(sx, sy);
            ++n;
          }
        }
      }
      out.at(x, y) = static_cast<std::uint16_t>(std::floor(sum / n + 0.5));
    }
  }
  return out;
}

std::map<std::string, std::string> tree_contents(const std::filesystem::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      files[std::filesystem::relative(e.path(), root).string()] =
          tissuelens::testing::read_file(e.path());
    }
  }
  return files;
}

SyntheticParams small_params() {
  SyntheticParams p;
  p.seed = 7;
  p.width = 300;
  p.height = 200;
  p.n_channels = 3;
  p.n_cells = 40;
  p.tile_size = 64;
  return p;
}

}  // namespace

TEST_SUITE("image_store") {

TEST_CASE("level count follows the halving chain") {
  CHECK(pyramid_level_count(26139, 27120, 1024) == 6);
  const auto dims = pyramid_level_dims(26139, 27120, 6);
  const std::vector<int> heights = {27120, 13560, 6780, 3390, 1695, 848};
  for (int l = 0; l < 6; ++l) CHECK(dims[l].height == heights[l]);
  CHECK(dims[5].width == 817);
  CHECK(pyramid_level_count(1024, 1024, 1024) == 1);
  CHECK(pyramid_level_count(1025, 10, 1024) == 2);
  CHECK(pyramid_level_count(5, 3, 1024) == 1);
}

TEST_CASE("block reductions") {
  const std::uint16_t a[] = {10, 20, 30, 40};
  CHECK(block_mean(a) == 25);
  const std::uint16_t b[] = {1, 2};
  CHECK(block_mean(b) == 2);
  const std::uint32_t m1[] = {5, 5, 7, 0};
  CHECK(block_majority_label(m1) == 5);
  const std::uint32_t m2[] = {3, 9, 0, 0};
  CHECK(block_majority_label(m2) == 3);
  const std::uint32_t m3[] = {0, 0, 0, 0};
  CHECK(block_majority_label(m3) == 0);
  const std::uint32_t m4[] = {0, 0, 0, 4};
  CHECK(block_majority_label(m4) == 4);
}

TEST_CASE("mean downsampling matches the reference on odd sizes") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    PlaneU16 p(1 + rng() % 37, 1 + rng() % 29);
    for (auto& v : p.data) v = static_cast<std::uint16_t>(rng());
    CHECK(downsample_mean(p) == mean_oracle(p));
  }
}

TEST_CASE("label downsampling never invents labels") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    PlaneU32 p(1 + rng() % 9, 1 + rng() % 9);
    for (auto& v : p.data) v = rng() % 4;
    const PlaneU32 d = downsample_labels(p);
    for (int y = 0; y < d.height; ++y) {
      for (int x = 0; x < d.width; ++x) {
        std::map<std::uint32_t, int> counts;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            if (2 * x + dx < p.width && 2 * y + dy < p.height) {
              ++counts[p.at(2 * x + dx, 2 * y + dy)];
            }
          }
        }
        std::uint32_t expect = 0;
        int best = 0;
        for (const auto& [label, n] : counts) {
          if (label != 0 && n > best) {
            best = n;
            expect = label;
          }
        }
        CHECK(d.at(x, y) == expect);
        CHECK(counts.count(d.at(x, y)) == 1);
      }
    }
  }
}

TEST_CASE("synthetic generation is deterministic") {
  TempDir a, b, c;
  auto params = small_params();
  generate_synthetic(a.path(), params);
  generate_synthetic(b.path(), params);
  CHECK(tree_contents(a.path()) == tree_contents(b.path()));
  params.seed = 8;
  generate_synthetic(c.path(), params);
  CHECK(tree_contents(a.path()) != tree_contents(c.path()));
}

TEST_CASE("open exposes meta and validates files") {
  TempDir dir;
  generate_synthetic(dir.path(), small_params());
  const auto ds = Dataset::open(dir.path());
  CHECK(ds->meta().channels.size() == 3);
  CHECK(ds->meta().has_mask);
  CHECK(ds->meta().levels == pyramid_level_count(300, 200, 64));

  TempDir empty;
  CHECK(kind_of([&] { Dataset::open(empty.path()); }) == ErrorKind::kSchema);

  // Truncated tile.
  const auto tile = channel_tile_path(dir.path(), "ch1", 0, 1, 1);
  std::filesystem::resize_file(tile, 10);
  CHECK(kind_of([&] { Dataset::open(dir.path()); }) == ErrorKind::kIntegrity);
  CHECK(error_text([&] { Dataset::open(dir.path()); }).find("1_1.bin") != std::string::npos);
}

TEST_CASE("corrupt meta.json reports a field path") {
  TempDir dir;
  generate_synthetic(dir.path(), small_params());
  auto j = nlohmann::json::parse(tissuelens::testing::read_file(dir / "meta.json"));
  j["channels"][1]["name"] = 5;
  std::ofstream(dir / "meta.json") << j.dump();
  try {
    Dataset::open(dir.path());
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSchema);
    CHECK(e.detail() == "/channels/1/name");
  }
}

TEST_CASE("region reads equal in-memory slices at every level") {
  TempDir dir;
  const auto params = small_params();
  const SyntheticData data = make_synthetic(params);
  write_synthetic(dir.path(), data);
  const auto ds = Dataset::open(dir.path());

  std::mt19937 rng(5);
  for (std::size_t c = 0; c < data.planes.size(); ++c) {
    PlaneU16 level_plane = data.planes[c];
    for (int level = 0; level < ds->meta().levels; ++level) {
      if (level > 0) level_plane = mean_oracle(level_plane);
      const auto dims = ds->meta().level_dims(level);
      REQUIRE(dims.width == level_plane.width);
      REQUIRE(dims.height == level_plane.height);
      for (int t = 0; t < 15; ++t) {
        const int x0 = rng() % dims.width, y0 = rng() % dims.height;
        const int x1 = x0 + 1 + rng() % (dims.width - x0);
        const int y1 = y0 + 1 + rng() % (dims.height - y0);
        const RegionRect r{level, x0, y0, x1, y1};
        CHECK(ds->read_region(data.meta.channels[c].name, r) == level_plane.crop(x0, y0, x1, y1));
      }
    }
  }
  // Straddles four tiles.
  const RegionRect four{0, 50, 50, 90, 90};
  CHECK(ds->read_region("ch0", four) == data.planes[0].crop(50, 50, 90, 90));
  // One pixel.
  const auto px = ds->read_region("ch2", {0, 123, 77, 124, 78});
  CHECK(px.width == 1);
  CHECK(px.data[0] == data.planes[2].at(123, 77));
  // Tile-aligned region is the stored tile.
  CHECK(ds->read_region("ch0", {0, 64, 128, 128, 192}) == ds->read_tile("ch0", 0, 1, 2));
  // Edge tile is truncated.
  const auto edge = ds->read_tile("ch0", 0, 4, 3);
  CHECK(edge.width == 300 - 256);
  CHECK(edge.height == 200 - 192);

  CHECK(kind_of([&] { ds->read_region("ch0", {0, 0, 0, 301, 10}); }) == ErrorKind::kBounds);
  CHECK(kind_of([&] { ds->read_region("ch0", {0, 5, 5, 5, 10}); }) == ErrorKind::kBounds);
  CHECK(kind_of([&] { ds->read_region("nope", {0, 0, 0, 1, 1}); }) == ErrorKind::kLookup);
  CHECK(kind_of([&] { ds->read_tile("ch0", 0, 5, 0); }) == ErrorKind::kNotFound);
}

TEST_CASE("mask reads identify planted cells") {
  TempDir dir;
  const auto params = small_params();
  const SyntheticData data = make_synthetic(params);
  write_synthetic(dir.path(), data);
  const auto ds = Dataset::open(dir.path());
  for (const auto& cell : data.manifest.cells) {
    const int x = static_cast<int>(std::floor(cell.cx));
    const int y = static_cast<int>(std::floor(cell.cy));
    CHECK(ds->read_mask_region({0, x, y, x + 1, y + 1}).data[0] == cell.id);
  }
  // Corner far from cells is background.
  const auto full = ds->read_mask_region({0, 0, 0, 300, 200});
  CHECK(full == data.mask);

  TempDir nomask;
  DatasetMeta meta = data.meta;
  build_pyramid(nomask.path(), meta, data.planes, nullptr);
  const auto ds2 = Dataset::open(nomask.path());
  CHECK_FALSE(ds2->meta().has_mask);
  CHECK(kind_of([&] { ds2->read_mask_region({0, 0, 0, 4, 4}); }) == ErrorKind::kCapability);
}

TEST_CASE("background mask region is all zero") {
  PlaneU32 mask(16, 16, 0);
  PlaneU16 plane(16, 16, 3);
  DatasetMeta meta;
  meta.width_px = 16;
  meta.height_px = 16;
  meta.tile_size = 8;
  meta.pixel_size_um = 1.0;
  meta.channels = {{"a", std::nullopt}};
  TempDir dir;
  build_pyramid(dir.path(), meta, std::vector<PlaneU16>{plane}, &mask);
  const auto ds = Dataset::open(dir.path());
  const auto r = ds->read_mask_region({0, 2, 2, 10, 10});
  CHECK(std::all_of(r.data.begin(), r.data.end(), [](std::uint32_t v) { return v == 0; }));
}

TEST_CASE("cells.csv means equal mask means recomputed from the planes") {
  TempDir dir;
  auto params = small_params();
  params.n_cells = 60;
  generate_synthetic(dir.path(), params);
  const auto ds = Dataset::open(dir.path());
  const RegionRect full{0, 0, 0, 300, 200};
  const PlaneU32 mask = ds->read_mask_region(full);
  std::vector<std::string> names = {"ch0", "ch1", "ch2"};
  const CellCsv csv = read_cells_csv(dir / "cells.csv", names);
  REQUIRE(csv.rows.size() == 60);
  CHECK(csv.has_type);
  for (std::size_t c = 0; c < names.size(); ++c) {
    const PlaneU16 plane = ds->read_region(names[c], full);
    std::map<std::uint32_t, std::pair<double, double>> acc;
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
      if (mask.data[i]) {
        acc[mask.data[i]].first += plane.data[i];
        acc[mask.data[i]].second += 1;
      }
    }
    for (const auto& row : csv.rows) {
      const auto& [sum, n] = acc.at(row.id);
      CHECK(row.means[c] == doctest::Approx(sum / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero cells yields a header-only table") {
  TempDir dir;
  auto params = small_params();
  params.n_cells = 0;
  generate_synthetic(dir.path(), params);
  const std::string text = tissuelens::testing::read_file(dir / "cells.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  CHECK(text.rfind("CellID,X,Y,ch0,ch1,ch2", 0) == 0);
}

TEST_CASE("infeasible density is rejected") {
  SyntheticParams p;
  p.width = 20;
  p.height = 20;
  p.n_cells = 500;
  CHECK(kind_of([&] { make_synthetic(p); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("export then ingest reproduces the pyramid") {
  TempDir src, flat, dst;
  generate_synthetic(src.path(), small_params());
  const auto ds = Dataset::open(src.path());
  std::filesystem::create_directories(flat.path());
  export_flat(*ds, flat.path());

  IngestParams ip;
  for (const auto& c : {"ch0", "ch1", "ch2"}) ip.planes.push_back(flat / (std::string(c) + ".tif"));
  ip.mask = flat / "mask.tif";
  ip.csv = flat / "cells.csv";
  ip.out_dir = dst.path();
  ip.tile_size = 64;
  ip.pixel_size_um = 0.325;
  const DatasetMeta meta = ingest(ip);
  CHECK(meta.levels == ds->meta().levels);
  auto a = tree_contents(src / "channels");
  auto b = tree_contents(dst / "channels");
  CHECK(a == b);
  CHECK(tree_contents(src / "mask") == tree_contents(dst / "mask"));
  // Cell types survive the trip.
  const CellCsv csv = read_cells_csv(dst / "cells.csv", {"ch0", "ch1", "ch2"});
  CHECK(csv.has_type);
  CHECK(csv.rows.front().type.has_value());
}

TEST_CASE("ingest errors") {
  TempDir src, flat, dst;
  generate_synthetic(src.path(), small_params());
  const auto ds = Dataset::open(src.path());
  export_flat(*ds, flat.path());

  IngestParams ip;
  ip.planes = {flat / "ch0.tif", flat / "ch1.tif"};
  ip.mask = flat / "mask.tif";
  ip.out_dir = dst.path();
  ip.tile_size = 64;

  // CSV lacking cell 3.
  {
    std::ifstream in(flat / "cells.csv");
    std::ofstream out(flat / "short.csv");
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("3,", 0) != 0) out << line << "\n";
    }
  }
  ip.csv = flat / "short.csv";
  try {
    ingest(ip);
    FAIL("expected integrity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIntegrity);
    CHECK(e.detail() == "3");
  }

  // CSV missing a channel column.
  {
    std::ofstream out(flat / "nocol.csv");
    out << "CellID,X,Y,ch0\n1,1,1,5\n";
  }
  ip.csv = flat / "nocol.csv";
  try {
    ingest(ip);
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSchema);
    CHECK(e.detail() == "ch1");
  }

  // Mismatched dimensions.
  write_tiff(flat / "odd.tif", PlaneU16(10, 10, 1));
  ip.planes = {flat / "ch0.tif", flat / "odd.tif"};
  ip.csv = flat / "cells.csv";
  CHECK(kind_of([&] { ingest(ip); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("tiff round trip") {
  TempDir dir;
  std::mt19937 rng(1);
  PlaneU16 a(17, 9);
  for (auto& v : a.data) v = static_cast<std::uint16_t>(rng());
  PlaneU32 m(5, 13);
  for (auto& v : m.data) v = rng();
  write_tiff(dir / "a.tif", a);
  write_tiff(dir / "m.tif", m);
  CHECK(read_tiff_u16(dir / "a.tif") == a);
  CHECK(read_tiff_u32(dir / "m.tif") == m);
}

TEST_CASE("tile cache stays within its bound") {
  TempDir dir;
  auto params = small_params();
  params.width = 512;
  params.height = 512;
  params.tile_size = 32;
  generate_synthetic(dir.path(), params);
  DatasetOptions opts;
  opts.cache_tiles_per_channel = 6;
  const auto ds = Dataset::open(dir.path(), opts);
  std::mt19937 rng(2);
  for (int i = 0; i < 200; ++i) {
    const int x = rng() % 480, y = rng() % 480;
    ds->read_region("ch0", {0, x, y, x + 32, y + 32});
  }
  const CacheStats s = ds->cache_stats("ch0");
  CHECK(s.capacity == 6);
  CHECK(s.peak_resident <= 6);
  CHECK(s.misses > 0);
}

TEST_CASE("cell csv parsing") {
  TempDir dir;
  std::ofstream(dir / "c.csv") << "X,CellID,Y,b,a,Extra,CellType\n"
                               << "1.5,7,2.5,10,20,zzz,\"T cell, CD8\"\n";
  const CellCsv csv = read_cells_csv(dir / "c.csv", {"a", "b"});
  REQUIRE(csv.rows.size() == 1);
  CHECK(csv.rows[0].id == 7);
  CHECK(csv.rows[0].x == 1.5);
  CHECK(csv.rows[0].means == std::vector<double>{20, 10});
  CHECK(*csv.rows[0].type == "T cell, CD8");

  std::ofstream(dir / "bad.csv") << "CellID,X,Y,a\n1,2,abc,4\n";
  CHECK(kind_of([&] { read_cells_csv(dir / "bad.csv", {"a"}); }) == ErrorKind::kSchema);
}

}  // TEST_SUITE
