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

#include <chrono>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "test_support.hpp"
#include "tissuelens/error.hpp"
#include "tissuelens/json_io.hpp"
#include "tissuelens/png_codec.hpp"
#include "tissuelens/pyramid.hpp"
#include "tissuelens/render.hpp"
#include "tissuelens/search.hpp"
#include "tissuelens/service.hpp"
#include "tissuelens/snapshot.hpp"
#include "tissuelens/snapshot_store.hpp"
#include "tissuelens/workspace.hpp"

using namespace tissuelens;
using tissuelens::testing::TempDir;

namespace {

struct Server {
  TempDir dir;
  SyntheticManifest manifest;
  std::shared_ptr<const Workspace> ws;
  std::unique_ptr<Service> service;
  std::unique_ptr<httplib::Client> client;

  explicit Server(bool with_data = true) {
    if (with_data) {
      SyntheticParams p;
      p.seed = 9;
      p.width = 400;
      p.height = 300;
      p.n_cells = 80;
      p.n_patterns = 2;
      p.pattern_half_size = 16;
      p.tile_size = 128;
      generate_synthetic(dir / "data", p);
      manifest = make_synthetic(p).manifest;
      ws = Workspace::open(dir / "data");
    }
    launch();
  }

  void launch() {
    ServiceOptions o;
    o.port = 0;
    o.snapshot_store = dir / "snapshots.json";
    o.search_tile_size = 100;
    service = std::make_unique<Service>(ws, o);
    const int port = service->start();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
    client->set_read_timeout(60, 0);
  }

  ~Server() { service->stop(); }
};

json body_of(const httplib::Result& r) { return json::parse(r->body); }

std::span<const std::uint8_t> bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

json state_json(double cx, double cy, double r) {
  return json::parse(R"({
    "viewport": {"level": 0, "x0": 0, "y0": 0, "x1": 400, "y1": 300},
    "context_channel_set": {"label": "ctx", "settings": [
      {"channel": "ch0", "color": [255, 255, 255], "range_lo": 0, "range_hi": 4000}]},
    "lens": {"geometry": {"shape": "circle", "cx": )" + std::to_string(cx) + R"(, "cy": )" +
                     std::to_string(cy) + R"(, "r": )" + std::to_string(r) + R"(},
      "mode": "search", "magnifier": "none", "mag_factor": 1.0, "plateau_fraction": 0.75,
      "blend_alpha": 1.0,
      "lens_channel_set": {"label": "lens", "settings": [
        {"channel": "ch1", "color": [255, 0, 0], "range_lo": 0, "range_hi": 4000},
        {"channel": "ch2", "color": [0, 255, 0], "range_lo": 0, "range_hi": 4000}]}},
    "stats_channels": ["ch0", "ch1"],
    "type_order": "by_count"})");
}

}  // namespace

TEST_SUITE("service") {

TEST_CASE("error mapping") {
  CHECK(to_api_error(Error(ErrorKind::kLookup, "x")).http_status == 400);
  CHECK(to_api_error(Error(ErrorKind::kNotFound, "x")).code == "not_found");
  CHECK(to_api_error(Error(ErrorKind::kConflict, "x")).http_status == 409);
  CHECK(to_api_error(Error(ErrorKind::kIntegrity, "x")).http_status == 500);
  CHECK(to_api_error(Error(ErrorKind::kCapability, "x")).http_status == 422);
  CHECK(to_api_error(Error(ErrorKind::kCapability, "x")).code == "capability");
}

TEST_CASE("no dataset loaded") {
  Server s(false);
  auto r = s.client->Get("/api/meta");
  REQUIRE(r);
  CHECK(r->status == 404);
  CHECK(body_of(r)["code"] == "not_found");
  CHECK(s.client->Get("/api/snapshots")->status == 404);
}

TEST_CASE("meta, tiles and preflight") {
  Server s;
  auto r = s.client->Get("/api/meta");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(body_of(r) == to_json(s.ws->meta()));
  CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");

  for (int level = 0; level < s.ws->meta().levels; ++level) {
    auto t = s.client->Get("/api/tile/ch1/" + std::to_string(level) + "/0/0");
    REQUIRE(t);
    CHECK(t->status == 200);
    CHECK(t->get_header_value("Content-Type") == "image/png");
    CHECK(decode_png_gray16(bytes(t->body)) == s.ws->dataset().read_tile("ch1", level, 0, 0));
  }
  auto edge = s.client->Get("/api/tile/ch0/0/3/2");
  REQUIRE(edge);
  CHECK(decode_png_gray16(bytes(edge->body)) == s.ws->dataset().read_tile("ch0", 0, 3, 2));
  CHECK(s.client->Get("/api/tile/CD99/0/0/0")->status == 404);
  CHECK(s.client->Get("/api/tile/ch0/17/0/0")->status == 404);
  CHECK(s.client->Get("/api/tile/ch0/x/0/0")->status == 404);
  CHECK(s.client->Get("/api/tile/ch0/0/999/0")->status == 404);

  auto pre = s.client->Options("/api/render");
  REQUIRE(pre);
  CHECK(pre->status == 204);
  CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
}

TEST_CASE("render matches the library") {
  Server s;
  const json st = state_json(200, 150, 50);
  json body = {{"viewport", st["viewport"]}, {"context", st["context_channel_set"]}, {"lens", st["lens"]}};
  body["lens"]["mode"] = "cell_type";
  auto r = s.client->Post("/api/render", body.dump(), "application/json");
  REQUIRE(r);
  REQUIRE(r->status == 200);
  const CaptureState cs = capture_state_from_json(st);
  LensState lens = cs.lens;
  lens.mode = LensMode::kCellType;
  const CellOverlay overlay = s.ws->overlay();
  CHECK(decode_png_rgba(bytes(r->body)) ==
        render_viewport(s.ws->dataset(), cs.viewport, cs.context_channel_set, lens, &overlay));

  body.erase("lens");
  r = s.client->Post("/api/render", body.dump(), "application/json");
  CHECK(decode_png_rgba(bytes(r->body)) ==
        render_viewport(s.ws->dataset(), cs.viewport, cs.context_channel_set, std::nullopt));

  auto bad = s.client->Post("/api/render", "{not json", "application/json");
  CHECK(bad->status == 400);
  body["viewport"]["x1"] = 4000;
  CHECK(s.client->Post("/api/render", body.dump(), "application/json")->status == 400);
  body.erase("viewport");
  auto missing = s.client->Post("/api/render", body.dump(), "application/json");
  CHECK(missing->status == 400);
  CHECK(body_of(missing)["detail"] == "/viewport");
}

TEST_CASE("lens statistics") {
  Server s;
  auto r = s.client->Get("/api/lens/stats?shape=circle&cx=200&cy=150&r=80&channels=ch0,ch2&mode=by_count");
  REQUIRE(r);
  CHECK(r->status == 200);
  const RegionStats want =
      s.ws->stats(LensGeometry::circle(200, 150, 80), {"ch0", "ch2"}, TypeOrder::kByCount);
  CHECK(body_of(r) == to_json(want));
  auto rect = s.client->Get("/api/lens/stats?shape=rectangle&cx=100&cy=100&half_w=40&half_h=20");
  CHECK(rect->status == 200);
  CHECK(body_of(rect) == to_json(s.ws->stats(LensGeometry::rect(100, 100, 40, 20),
                                             s.ws->default_stats_channels(), TypeOrder::kLocked)));
  auto missing = s.client->Get("/api/lens/stats?cx=1&cy=2");
  CHECK(missing->status == 400);
  CHECK(body_of(missing)["detail"] == "r");
  auto unknown = s.client->Get("/api/lens/stats?cx=1&cy=2&r=5&channels=CD8");
  CHECK(unknown->status == 400);
  CHECK(body_of(unknown)["detail"] == "CD8");
}

TEST_CASE("datasets without cells report a capability error") {
  TempDir dir;
  DatasetMeta meta;
  meta.width_px = 64;
  meta.height_px = 64;
  meta.tile_size = 64;
  meta.channels = {{"a", std::nullopt}};
  build_pyramid(dir.path(), meta, std::vector<PlaneU16>{PlaneU16(64, 64, 7)}, nullptr);
  ServiceOptions o;
  o.port = 0;
  Service svc(Workspace::open(dir.path()), o);
  httplib::Client c("127.0.0.1", svc.start());
  auto r = c.Get("/api/lens/stats?cx=10&cy=10&r=5&channels=a");
  REQUIRE(r);
  CHECK(r->status == 422);
  CHECK(body_of(r)["code"] == "capability");
  svc.stop();
}

TEST_CASE("search endpoints") {
  Server s;
  const auto& pat = s.manifest.patterns[0];
  const json st = state_json(pat.cx + 0.5, pat.cy + 0.5, 16);
  json req = {{"channels", st["lens"]["lens_channel_set"]},
              {"geometry", st["lens"]["geometry"]},
              {"threshold", 0.8},
              {"bins", 32},
              {"scope", "viewport"},
              {"viewport", st["viewport"]}};
  const SearchRequest sr = search_request_from_json(req);
  auto r = s.client->Post("/api/search", req.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(body_of(r) == to_geojson(search_viewport(s.ws->dataset(), region_from_json(st["viewport"]), sr)));

  req["scope"] = "whole";
  r = s.client->Post("/api/search", req.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 202);
  const std::string job = body_of(r)["job_id"];
  json status;
  for (int i = 0; i < 600; ++i) {
    status = body_of(s.client->Get("/api/search/" + job));
    if (status["state"] != "pending") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  REQUIRE(status["state"] == "done");
  CHECK(status["result"] == to_geojson(search_whole_image(s.ws->dataset(), sr, 100)));
  CHECK(status["result"]["features"].size() >= 2);

  req["channels"] = json::array({"CD8"});
  r = s.client->Post("/api/search", req.dump(), "application/json");
  CHECK(r->status == 202);
  const std::string failing = body_of(r)["job_id"];
  for (int i = 0; i < 200; ++i) {
    status = body_of(s.client->Get("/api/search/" + failing));
    if (status["state"] != "pending") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  CHECK(status["state"] == "failed");
  CHECK(status["error"]["code"] == "bad_request");
  CHECK(s.client->Get("/api/search/job-999999")->status == 404);
  req["scope"] = "galaxy";
  CHECK(s.client->Post("/api/search", req.dump(), "application/json")->status == 400);
  req["scope"] = "viewport";
  req["threshold"] = 1.5;
  CHECK(s.client->Post("/api/search", req.dump(), "application/json")->status == 400);
}

TEST_CASE("snapshot lifecycle") {
  Server s;
  json body = {{"state", state_json(200, 150, 40)}, {"title", "PD-L1 front"}, {"description", "d"}};
  auto r = s.client->Post("/api/snapshots", body.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 201);
  const RichSnapshot created = snapshot_from_json(body_of(r));
  CHECK(created.state == capture_state_from_json(body["state"]));
  CHECK(created.stats == s.ws->stats(created.geometry(), {"ch0", "ch1"}, TypeOrder::kByCount));

  body["title"] = "Stroma";
  CHECK(s.client->Post("/api/snapshots", body.dump(), "application/json")->status == 201);
  CHECK(body_of(s.client->Get("/api/snapshots")).size() == 2);
  CHECK(body_of(s.client->Get("/api/snapshots?query=pd-l1")).size() == 1);

  auto got = s.client->Get("/api/snapshots/" + created.id);
  CHECK(snapshot_from_json(body_of(got)) == created);
  auto thumb = s.client->Get("/api/snapshots/" + created.id + "/thumbnail");
  CHECK(thumb->get_header_value("Content-Type") == "image/png");
  CHECK(std::vector<std::uint8_t>(thumb->body.begin(), thumb->body.end()) == created.thumbnail_png);
  auto restored = s.client->Get("/api/snapshots/" + created.id + "/restore");
  CHECK(capture_state_from_json(body_of(restored)) == created.state);
  auto trusted = s.client->Get("/api/snapshots/" + created.id + "/restore?trust_stats=true");
  CHECK(body_of(trusted)["stats"] == to_json(created.stats));

  auto ext = s.client->Post("/api/snapshots/" + created.id + "/extend_search", R"({"threshold": 0.9})",
                            "application/json");
  REQUIRE(ext);
  CHECK(ext->status == 200);
  const json ej = body_of(ext);
  CHECK(ej["provisional"].size() == ej["contours"]["features"].size());
  CHECK(body_of(s.client->Get("/api/snapshots")).size() == 2);

  CHECK(s.client->Delete("/api/snapshots/" + created.id)->status == 204);
  CHECK(s.client->Get("/api/snapshots/" + created.id)->status == 404);
  CHECK(s.client->Delete("/api/snapshots/" + created.id)->status == 404);

  body["state"]["stats_channels"] = json::array({"nope"});
  auto bad = s.client->Post("/api/snapshots", body.dump(), "application/json");
  CHECK(bad->status == 400);
  CHECK(body_of(bad)["detail"] == "nope");
  CHECK(s.client->Post("/api/snapshots", R"({"title": "x"})", "application/json")->status == 400);
}

TEST_CASE("restoring stats captured on another dataset conflicts") {
  Server s;
  RichSnapshot snap = create_snapshot(*s.ws, capture_state_from_json(state_json(100, 100, 30)), "t", "");
  snap.dataset_meta_hash = "ffffffffffffffff";
  s.service->stop();
  s.service.reset();
  save_store(s.dir / "snapshots.json", {kSnapshotSchemaVersion, s.ws->meta_hash(), {snap}});
  s.launch();
  auto plain = s.client->Get("/api/snapshots/" + snap.id + "/restore");
  CHECK(plain->status == 200);
  auto r = s.client->Get("/api/snapshots/" + snap.id + "/restore?trust_stats=1");
  REQUIRE(r);
  CHECK(r->status == 409);
  CHECK(body_of(r)["code"] == "integrity");
}

TEST_CASE("busy port is reported") {
  Server s;
  ServiceOptions o;
  o.port = s.service->port();
  Service second(s.ws, o);
  try {
    second.bind();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
}

}  // TEST_SUITE
