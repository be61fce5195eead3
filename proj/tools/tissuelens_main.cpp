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

// tissuelens command line: synthetic data, ingestion, serving, batch search
// and lens statistics.

#include <glob.h>

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tissuelens/error.hpp"
#include "tissuelens/ingest.hpp"
#include "tissuelens/json_io.hpp"
#include "tissuelens/search.hpp"
#include "tissuelens/service.hpp"
#include "tissuelens/snapshot_store.hpp"
#include "tissuelens/synthetic.hpp"
#include "tissuelens/workspace.hpp"

namespace tl = tissuelens;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIntegrity = 3;
constexpr int kExitInternal = 4;

int exit_code(tl::ErrorKind kind) {
  switch (kind) {
    case tl::ErrorKind::kInvalidArgument:
    case tl::ErrorKind::kBounds:
    case tl::ErrorKind::kLookup:
    case tl::ErrorKind::kDegenerate:
      return kExitUsage;
    default:
      return kExitIntegrity;
  }
}

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const auto& p : patterns) {
    glob_t g{};
    const int rc = ::glob(p.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc == GLOB_NOMATCH) {
      tl::fail(tl::ErrorKind::kInvalidArgument, "no files match '" + p + "'", p);
    }
  }
  return out;
}

/// name[:lo:hi] entries separated by commas.
tl::ChannelSet parse_channels(const std::string& text) {
  tl::ChannelSet set;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    tl::ChannelRenderSetting s;
    const auto c1 = item.find(':');
    s.channel = item.substr(0, c1);
    if (c1 != std::string::npos) {
      const auto c2 = item.find(':', c1 + 1);
      if (c2 == std::string::npos) {
        tl::fail(tl::ErrorKind::kInvalidArgument, "channel range must be name:lo:hi", item);
      }
      try {
        const long lo = std::stol(item.substr(c1 + 1, c2 - c1 - 1));
        const long hi = std::stol(item.substr(c2 + 1));
        if (lo < 0 || hi > 65535 || lo >= hi) throw std::out_of_range("range");
        s.range_lo = static_cast<std::uint16_t>(lo);
        s.range_hi = static_cast<std::uint16_t>(hi);
      } catch (const std::logic_error&) {
        tl::fail(tl::ErrorKind::kInvalidArgument, "bad channel range in '" + item + "'", item);
      }
    }
    set.settings.push_back(s);
  }
  set.validate();
  return set;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) tl::fail(tl::ErrorKind::kIo, "cannot write " + path, path);
  f << text << "\n";
  if (!f) tl::fail(tl::ErrorKind::kIo, "cannot write " + path, path);
}

struct GeometryArgs {
  std::string shape = "circle";
  double cx = 0, cy = 0, r = 0, half_w = 0, half_h = 0;

  void add(CLI::App* app) {
    app->add_option("--shape", shape, "circle or rectangle")
        ->check(CLI::IsMember({"circle", "rectangle", "rect"}));
    app->add_option("--cx", cx, "lens center x, level-0 px")->required();
    app->add_option("--cy", cy, "lens center y, level-0 px")->required();
    app->add_option("--r", r, "circle radius, level-0 px")->check(CLI::NonNegativeNumber);
    app->add_option("--half-w", half_w, "rectangle half width")->check(CLI::NonNegativeNumber);
    app->add_option("--half-h", half_h, "rectangle half height")->check(CLI::NonNegativeNumber);
  }

  tl::LensGeometry geometry() const {
    return tl::parse_lens_shape(shape) == tl::LensShape::kCircle
               ? tl::LensGeometry::circle(cx, cy, r)
               : tl::LensGeometry::rect(cx, cy, half_w, half_h);
  }
};

tl::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tissuelens: multiplexed tissue image exploration engine"};
  app.require_subcommand(1);

  // gen-synthetic
  tl::SyntheticParams syn;
  std::string syn_out;
  auto* gen = app.add_subcommand("gen-synthetic", "Write a seeded synthetic dataset");
  gen->add_option("--out", syn_out, "output directory")->required();
  gen->add_option("--width", syn.width)->check(CLI::PositiveNumber);
  gen->add_option("--height", syn.height)->check(CLI::PositiveNumber);
  gen->add_option("--channels", syn.n_channels)->check(CLI::PositiveNumber);
  gen->add_option("--cells", syn.n_cells)->check(CLI::NonNegativeNumber);
  gen->add_option("--patterns", syn.n_patterns)->check(CLI::NonNegativeNumber);
  gen->add_option("--pattern-half-size", syn.pattern_half_size)->check(CLI::PositiveNumber);
  gen->add_option("--seed", syn.seed);
  gen->add_option("--tile-size", syn.tile_size)->check(CLI::PositiveNumber);
  gen->add_option("--pixel-size-um", syn.pixel_size_um)->check(CLI::PositiveNumber);

  // ingest
  std::vector<std::string> ing_planes;
  tl::IngestParams ing;
  std::string ing_mask, ing_csv, ing_out;
  auto* ingest = app.add_subcommand("ingest", "Build a dataset from TIFF planes and a cell CSV");
  ingest->add_option("--planes", ing_planes, "TIFF files or glob patterns")->required();
  ingest->add_option("--mask", ing_mask, "32-bit label TIFF");
  ingest->add_option("--csv", ing_csv, "cell feature table")->required();
  ingest->add_option("--out", ing_out, "output directory")->required();
  ingest->add_option("--tile-size", ing.tile_size)->check(CLI::PositiveNumber);
  ingest->add_option("--pixel-size-um", ing.pixel_size_um)->check(CLI::PositiveNumber);

  // export
  std::string exp_data, exp_out;
  auto* exp = app.add_subcommand("export", "Write level-0 planes as TIFF plus the cell CSV");
  exp->add_option("--data", exp_data)->required();
  exp->add_option("--out", exp_out)->required();

  // serve
  std::string srv_data;
  tl::ServiceOptions srv;
  std::string srv_store;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API for one dataset");
  serve->add_option("--data", srv_data)->required();
  serve->add_option("--port", srv.port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", srv.host);
  serve->add_option("--snapshots", srv_store, "snapshot store file");

  // search
  std::string se_data, se_channels, se_out;
  GeometryArgs se_geom;
  double se_threshold = tl::kDefaultSearchThreshold;
  int se_bins = tl::kDefaultSearchBins;
  int se_tile = tl::kDefaultSearchTile;
  auto* search = app.add_subcommand("search", "Whole-image histogram similarity search");
  search->add_option("--data", se_data)->required();
  search->add_option("--channels", se_channels, "name[:lo:hi],...")->required();
  se_geom.add(search);
  search->add_option("--threshold", se_threshold)->check(CLI::Range(0.0, 1.0));
  search->add_option("--bins", se_bins)->check(CLI::Range(2, tl::kMaxSearchBins));
  search->add_option("--tile-size", se_tile)->check(CLI::NonNegativeNumber);
  search->add_option("--out", se_out, "GeoJSON file (stdout if omitted)");

  // stats
  std::string st_data, st_channels, st_out, st_mode = "locked";
  GeometryArgs st_geom;
  auto* stats = app.add_subcommand("stats", "Lens region statistics as JSON");
  stats->add_option("--data", st_data)->required();
  st_geom.add(stats);
  stats->add_option("--channels", st_channels, "histogram channels, comma separated");
  stats->add_option("--mode", st_mode, "type count order")
      ->check(CLI::IsMember({"locked", "by_count"}));
  stats->add_option("--out", st_out, "JSON file (stdout if omitted)");

  // snapshot-export
  std::string sx_store, sx_id, sx_out;
  auto* snap_export =
      app.add_subcommand("snapshot-export", "Write one stored snapshot as <id>.json and <id>.png");
  snap_export->add_option("--store", sx_store, "snapshot store file")->required();
  snap_export->add_option("--id", sx_id)->required();
  snap_export->add_option("--out", sx_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      std::cout << tl::generate_synthetic(syn_out, syn).string() << "\n";
    } else if (*ingest) {
      for (const auto& p : expand_globs(ing_planes)) ing.planes.emplace_back(p);
      if (!ing_mask.empty()) ing.mask = ing_mask;
      ing.csv = ing_csv;
      ing.out_dir = ing_out;
      const tl::DatasetMeta meta = tl::ingest(ing);
      std::cerr << "ingested " << meta.channels.size() << " channels, " << meta.levels
                << " levels into " << ing_out << "\n";
    } else if (*exp) {
      const auto ds = tl::Dataset::open(exp_data);
      tl::export_flat(*ds, exp_out);
    } else if (*serve) {
      const auto ws = tl::Workspace::open(srv_data);
      if (!srv_store.empty()) srv.snapshot_store = srv_store;
      tl::Service service(ws, srv);
      const int port = service.bind();
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving " << srv_data << " on http://" << srv.host << ":" << port << "\n";
      service.run();
      g_service = nullptr;
    } else if (*search) {
      const auto ws = tl::Workspace::open(se_data);
      tl::SearchRequest req;
      req.channels = parse_channels(se_channels);
      req.geometry = se_geom.geometry();
      req.threshold = se_threshold;
      req.bins = se_bins;
      const auto contours = tl::search_whole_image(ws->dataset(), req, se_tile);
      write_output(se_out, tl::canonical_dump(tl::to_geojson(contours)));
      std::cerr << contours.polygons.size() << " contours\n";
    } else if (*stats) {
      const auto ws = tl::Workspace::open(st_data);
      const tl::LensGeometry g = st_geom.geometry();
      g.validate(/*allow_zero=*/true);
      std::vector<std::string> channels = ws->default_stats_channels();
      if (!st_channels.empty()) channels = parse_channels(st_channels).channel_names();
      const auto s = ws->stats(g, channels, tl::parse_type_order(st_mode));
      write_output(st_out, tl::canonical_dump(tl::to_json(s)));
    } else if (*snap_export) {
      const tl::SnapshotFile file = tl::load_store(sx_store);
      const auto it = std::find_if(file.snapshots.begin(), file.snapshots.end(),
                                   [&](const tl::RichSnapshot& s) { return s.id == sx_id; });
      if (it == file.snapshots.end()) {
        tl::fail(tl::ErrorKind::kNotFound, "no snapshot '" + sx_id + "'", sx_id);
      }
      const auto paths = tl::export_snapshot(*it, sx_out);
      std::cout << paths.json.string() << "\n" << paths.png.string() << "\n";
    }
  } catch (const tl::Error& e) {
    std::cerr << "error [" << tl::to_string(e.kind()) << "]: " << e.what();
    if (!e.detail().empty()) std::cerr << " (" << e.detail() << ")";
    std::cerr << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
