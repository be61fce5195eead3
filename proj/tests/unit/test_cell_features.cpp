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
#include <numbers>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "tissuelens/ball_tree.hpp"
#include "tissuelens/cell_table.hpp"
#include "tissuelens/error.hpp"
#include "tissuelens/region_stats.hpp"
#include "tissuelens/synthetic.hpp"
#include "tissuelens/workspace.hpp"

using namespace tissuelens;
using tissuelens::testing::TempDir;

namespace {

DatasetMeta meta_for(int w, int h, std::vector<std::string> names) {
  DatasetMeta m;
  m.width_px = w;
  m.height_px = h;
  for (auto& n : names) m.channels.push_back({n, std::nullopt});
  return m;
}

CellCsv random_cells(std::size_t n, int w, int h, std::uint32_t seed,
                     const std::vector<std::string>& channels,
                     const std::vector<std::string>& types = {}) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(0, w), uy(0, h);
  std::lognormal_distribution<double> val(6.0, 1.0);
  CellCsv csv;
  csv.channels = channels;
  csv.has_type = !types.empty();
  for (std::size_t i = 0; i < n; ++i) {
    CellRow r;
    r.id = static_cast<std::uint32_t>(i + 1);
    r.x = ux(rng);
    r.y = uy(rng);
    for (std::size_t c = 0; c < channels.size(); ++c) r.means.push_back(val(rng));
    if (!types.empty()) r.type = types[rng() % types.size()];
    csv.rows.push_back(std::move(r));
  }
  return csv;
}

bool inside(const LensGeometry& g, double x, double y) {
  const double dx = x - g.center.x, dy = y - g.center.y;
  if (g.shape == LensShape::kCircle) return dx * dx + dy * dy <= g.radius * g.radius;
  return std::abs(dx) <= g.half_w && std::abs(dy) <= g.half_h;
}

}  // namespace

TEST_SUITE("cell_features") {

TEST_CASE("nearest rank percentiles") {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i + 1;
  CHECK(nearest_rank_percentile(v, 1.0) == 1.0);
  CHECK(nearest_rank_percentile(v, 99.0) == 99.0);
  CHECK(nearest_rank_percentile(v, 50.0) == 50.0);
  std::vector<double> ten(v.begin(), v.begin() + 10);
  CHECK(nearest_rank_percentile(ten, 1.0) == 1.0);
  CHECK(nearest_rank_percentile(ten, 99.0) == 10.0);
  CHECK(nearest_rank_percentile({7.0}, 99.0) == 7.0);
  CHECK_THROWS_AS(nearest_rank_percentile({}, 50.0), Error);
}

TEST_CASE("ball tree agrees with a linear scan") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0, 1000);
  std::vector<Point> pts;
  for (int i = 0; i < 3000; ++i) pts.push_back({u(rng), u(rng)});
  // Integer lattice points to exercise exact boundary hits, plus duplicates.
  for (int i = 0; i < 200; ++i) pts.push_back({static_cast<double>(rng() % 50), static_cast<double>(rng() % 50)});
  for (int i = 0; i < 50; ++i) pts.push_back({500, 500});

  for (std::size_t leaf : {std::size_t{1}, std::size_t{8}, BallTree::kDefaultLeafSize}) {
    const BallTree tree(pts, leaf);
    CHECK(tree.size() == pts.size());
    for (int q = 0; q < 150; ++q) {
      LensGeometry g;
      if (q % 3 == 0) {
        g = LensGeometry::rect(u(rng), u(rng), u(rng) / 4, u(rng) / 4);
      } else if (q % 3 == 1) {
        g = LensGeometry::circle(u(rng), u(rng), u(rng) / 3);
      } else {
        g = LensGeometry::circle(static_cast<double>(rng() % 50), static_cast<double>(rng() % 50),
                                 static_cast<double>(rng() % 10));
      }
      std::vector<std::uint32_t> got = tree.query(g);
      std::sort(got.begin(), got.end());
      std::vector<std::uint32_t> want;
      for (std::uint32_t i = 0; i < pts.size(); ++i) {
        if (inside(g, pts[i].x, pts[i].y)) want.push_back(i);
      }
      CHECK(got == want);
    }
  }
  const BallTree empty(std::span<const Point>{});
  CHECK(empty.query(LensGeometry::circle(0, 0, 100)).empty());
}

TEST_CASE("zero radius query at a centroid returns that cell") {
  const auto csv = random_cells(500, 400, 300, 3, {"a"});
  const DatasetMeta meta = meta_for(400, 300, {"a"});
  const CellTable table = CellTable::from_csv(csv, meta);
  const CellIndex index(table);
  for (int i = 0; i < 20; ++i) {
    const auto& c = table.cells()[static_cast<std::size_t>(i) * 17];
    const auto ids = index.query_region(LensGeometry::circle(c.x, c.y, 0.0));
    REQUIRE(ids.size() == 1);
    CHECK(ids[0] == c.cell_id);
  }
}

TEST_CASE("histograms conserve counts and report true means") {
  const std::vector<std::string> ch = {"a", "b"};
  const auto csv = random_cells(4000, 800, 800, 8, ch, {"T", "B"});
  const CellTable table = CellTable::from_csv(csv, meta_for(800, 800, ch));
  const CellIndex index(table);

  for (std::size_t c = 0; c < ch.size(); ++c) {
    const auto& g = table.global(c);
    CHECK_FALSE(g.degenerate);
    REQUIRE(g.bin_edges.size() == kHistogramBins + 1);
    std::uint64_t in_range = 0;
    for (const auto& cell : table.cells()) {
      if (cell.means[c] >= g.p1 && cell.means[c] <= g.p99) ++in_range;
    }
    std::uint64_t total = 0;
    for (auto n : g.global_counts) total += n;
    CHECK(total == in_range);
    CHECK(g.bin_edges.front() == doctest::Approx(std::log2(g.p1 + 1)));
    CHECK(g.bin_edges.back() == doctest::Approx(std::log2(g.p99 + 1)));
  }

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0, 800);
  for (int q = 0; q < 40; ++q) {
    const LensGeometry g = LensGeometry::circle(u(rng), u(rng), 20 + u(rng) / 8);
    const RegionStats s = compute_region_stats(table, index, g, ch, TypeOrder::kLocked, 0.5);
    CHECK(s.n_cells == s.cell_ids.size());
    CHECK(s.empty == (s.n_cells == 0));
    CHECK(std::is_sorted(s.cell_ids.begin(), s.cell_ids.end()));
    for (std::size_t c = 0; c < ch.size(); ++c) {
      const auto& h = s.histograms[c];
      std::uint64_t total = h.clipped;
      for (auto n : h.counts) total += n;
      CHECK(total == s.n_cells);
      double sum = 0.0;
      std::uint64_t bin_oracle_first = 0;
      for (auto id : s.cell_ids) {
        const double v = table.cells()[table.row_of(id)].means[c];
        sum += v;
        const double t = std::log2(v + 1);
        if (v >= table.global(c).p1 && v <= table.global(c).p99 && t < h.bin_edges[1]) {
          ++bin_oracle_first;
        }
      }
      CHECK(h.counts[0] == bin_oracle_first);
      if (s.n_cells) {
        REQUIRE(h.region_mean.has_value());
        CHECK(*h.region_mean == doctest::Approx(sum / s.n_cells).epsilon(1e-12));
        CHECK(*s.radial_means[c].region_mean == doctest::Approx(sum / s.n_cells).epsilon(1e-12));
      } else {
        CHECK_FALSE(h.region_mean.has_value());
      }
    }
    std::uint64_t typed = 0;
    for (const auto& [name, n] : s.type_counts) typed += n;
    CHECK(typed == s.n_cells);
  }

  const RegionStats none =
      compute_region_stats(table, index, LensGeometry::circle(-500, -500, 1), ch, TypeOrder::kLocked, 1);
  CHECK(none.empty);
  CHECK_FALSE(none.radial_means[0].region_mean.has_value());
  CHECK(none.radial_means[0].global_mean == doctest::Approx(table.global(0).mean));
}

TEST_CASE("type count orders") {
  CellCsv csv;
  csv.channels = {"a"};
  csv.has_type = true;
  const std::vector<std::string> types = {"Tumor", "B cell", "T cell", "B cell", "T cell", "T cell"};
  for (std::size_t i = 0; i < types.size(); ++i) {
    csv.rows.push_back({static_cast<std::uint32_t>(i + 1), 1.0 + i, 1.0, {1.0 + i}, types[i]});
  }
  csv.rows.push_back({99, 50, 50, {3}, std::nullopt});
  const CellTable table = CellTable::from_csv(csv, meta_for(100, 100, {"a"}));
  CHECK(table.type_order() == std::vector<std::string>{"Tumor", "B cell", "T cell"});

  const std::vector<std::uint32_t> ids = {2, 3, 4, 5, 6, 99};
  const auto locked = type_counts(table, ids, TypeOrder::kLocked);
  CHECK(locked == std::vector<TypeCount>{{"Tumor", 0}, {"B cell", 2}, {"T cell", 3}});
  const auto ranked = type_counts(table, ids, TypeOrder::kByCount);
  CHECK(ranked == std::vector<TypeCount>{{"T cell", 3}, {"B cell", 2}});
  const std::vector<std::uint32_t> tie = {1, 2};
  CHECK(type_counts(table, tie, TypeOrder::kByCount) ==
        std::vector<TypeCount>{{"B cell", 1}, {"Tumor", 1}});
  CHECK(parse_type_order("by_count") == TypeOrder::kByCount);
  CHECK_THROWS_AS(parse_type_order("random"), Error);
}

TEST_CASE("brush filter selects by log intensity") {
  CellCsv csv;
  csv.channels = {"a"};
  const double values[] = {0, 1, 3, 7, 15, 31};
  for (int i = 0; i < 6; ++i) csv.rows.push_back({static_cast<std::uint32_t>(i + 1), 1, 1, {values[i]}, {}});
  const CellTable table = CellTable::from_csv(csv, meta_for(10, 10, {"a"}));
  const std::vector<std::uint32_t> ids = {1, 2, 3, 4, 5, 6};
  CHECK(brush_filter(table, ids, "a", 1.0, 3.0) == std::vector<std::uint32_t>{2, 3, 4});
  CHECK(brush_filter(table, ids, "a", 0.0, 0.0) == std::vector<std::uint32_t>{1});
  CHECK_THROWS_AS(brush_filter(table, ids, "a", 3.0, 1.0), Error);
  CHECK_THROWS_AS(brush_filter(table, ids, "zz", 0.0, 1.0), Error);
}

TEST_CASE("degenerate and invalid tables") {
  CellCsv csv;
  csv.channels = {"flat", "ok"};
  for (int i = 0; i < 10; ++i) {
    csv.rows.push_back({static_cast<std::uint32_t>(i + 1), 5, 5, {42.0, static_cast<double>(i)}, {}});
  }
  const auto meta = meta_for(10, 10, {"flat", "ok"});
  const CellTable table = CellTable::from_csv(csv, meta);
  CHECK(table.global(0).degenerate);
  const std::vector<std::uint32_t> ids = {1, 2};
  try {
    region_histograms(table, ids, {"flat"});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerate);
  }
  try {
    region_histograms(table, ids, {"nope"});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kLookup);
  }
  CHECK(region_histograms(table, ids, {"ok"}).size() == 1);

  CellCsv dup = csv;
  dup.rows[3].id = 1;
  CHECK_THROWS_AS(CellTable::from_csv(dup, meta), Error);
  CellCsv outside = csv;
  outside.rows[0].x = 11;
  CHECK_THROWS_AS(CellTable::from_csv(outside, meta), Error);
  CellCsv negative = csv;
  negative.rows[0].means[1] = -1;
  CHECK_THROWS_AS(CellTable::from_csv(negative, meta), Error);
  CHECK_THROWS_AS(CellTable::from_csv(csv, meta_for(10, 10, {"ok", "flat"})), Error);
}

TEST_CASE("region area") {
  CHECK(region_area_um2(LensGeometry::circle(0, 0, 10), 0.5) ==
        doctest::Approx(std::numbers::pi * 100 * 0.25));
  CHECK(region_area_um2(LensGeometry::rect(0, 0, 3, 4), 2.0) == doctest::Approx(4 * 3 * 4 * 4.0));
  CHECK_THROWS_AS(region_area_um2(LensGeometry::circle(0, 0, 1), 0.0), Error);
}

TEST_CASE("workspace stats match direct computation") {
  TempDir dir;
  SyntheticParams p;
  p.width = 400;
  p.height = 400;
  p.n_cells = 300;
  p.tile_size = 128;
  generate_synthetic(dir.path(), p);
  const auto ws = Workspace::open(dir.path());
  REQUIRE(ws->has_cells());
  const auto channels = ws->default_stats_channels();
  CHECK(channels.size() == 3);
  const LensGeometry g = LensGeometry::circle(200, 200, 120);
  const RegionStats a = ws->stats(g, channels, TypeOrder::kByCount);
  const RegionStats b = compute_region_stats(ws->table(), ws->index(), g, channels,
                                             TypeOrder::kByCount, ws->meta().pixel_size_um);
  CHECK(a == b);
  CHECK(a.n_cells > 0);
  CHECK_THROWS_AS(ws->stats(g, {"missing"}, TypeOrder::kLocked), Error);
}

}  // TEST_SUITE
