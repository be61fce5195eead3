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

#include "tissuelens/service.hpp"

#include <atomic>
#include <charconv>
#include <condition_variable>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "httplib.h"
#include "tissuelens/json_io.hpp"
#include "tissuelens/png_codec.hpp"
#include "tissuelens/render.hpp"
#include "tissuelens/search.hpp"
#include "tissuelens/snapshot_store.hpp"

namespace tissuelens {

ApiError to_api_error(const Error& e) {
  ApiError a;
  a.message = e.what();
  a.detail = e.detail();
  switch (e.kind()) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kBounds:
    case ErrorKind::kLookup:
    case ErrorKind::kDegenerate:
    case ErrorKind::kSchema:
      a.http_status = 400;
      a.code = "bad_request";
      break;
    case ErrorKind::kNotFound:
      a.http_status = 404;
      a.code = "not_found";
      break;
    case ErrorKind::kConflict:
      a.http_status = 409;
      a.code = "integrity";
      break;
    case ErrorKind::kIntegrity:
    case ErrorKind::kVersion:
    case ErrorKind::kIo:
      a.http_status = 500;
      a.code = "integrity";
      break;
    case ErrorKind::kCapability:
      a.http_status = 422;
      a.code = "capability";
      break;
  }
  return a;
}

nlohmann::json to_json(const ApiError& e) {
  return {{"code", e.code}, {"message", e.message}, {"detail", e.detail}};
}

namespace {

struct Job {
  std::string state = "pending";  // pending | done | failed
  json result;
  json error;
};

double query_number(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) {
    fail(ErrorKind::kInvalidArgument, std::string("missing query parameter '") + key + "'", key);
  }
  const std::string v = req.get_param_value(key);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    fail(ErrorKind::kInvalidArgument, std::string("query parameter '") + key + "' is not a number",
         key);
  }
  return out;
}

int path_int(const std::string& s, const char* what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorKind::kNotFound, std::string("bad ") + what + " '" + s + "'", what);
  }
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

struct Service::Impl {
  std::shared_ptr<const Workspace> ws;
  ServiceOptions options;
  httplib::Server server;
  std::optional<SnapshotStore> store;
  int bound_port = -1;
  std::thread thread;

  std::mutex jobs_mutex;
  std::map<std::string, Job> jobs;
  std::vector<std::thread> workers;
  std::atomic<std::uint64_t> job_counter{0};

  Impl(std::shared_ptr<const Workspace> w, ServiceOptions o)
      : ws(std::move(w)), options(std::move(o)) {
    if (ws) {
      auto path = options.snapshot_store.empty() ? ws->dataset().root() / "snapshots.json"
                                                 : options.snapshot_store;
      store.emplace(path, ws->meta_hash());
    }
    routes();
  }

  ~Impl() {
    server.stop();
    if (thread.joinable()) thread.join();
    for (auto& t : workers) {
      if (t.joinable()) t.join();
    }
  }

  const Workspace& workspace() const {
    if (!ws) fail(ErrorKind::kNotFound, "no dataset loaded", "dataset");
    return *ws;
  }

  SnapshotStore& snapshots() {
    workspace();
    return *store;
  }

  static void send_json(httplib::Response& res, const json& j, int status = 200) {
    res.status = status;
    res.set_content(j.dump(), "application/json");
  }

  static void send_error(httplib::Response& res, const ApiError& e) {
    send_json(res, to_json(e), e.http_status);
  }

  template <typename F>
  auto guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, to_api_error(e));
      } catch (const std::exception& e) {
        send_error(res, {500, "internal", e.what(), ""});
      }
    };
  }

  json parse_body(const httplib::Request& req) {
    return parse_json(req.body, "request body");
  }

  void routes() {
    // SO_REUSEADDR only: a second server on a busy port must fail to bind.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });

    server.Get("/api/meta", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, to_json(workspace().meta()));
    }));

    server.Get(R"(/api/tile/([^/]+)/([^/]+)/([^/]+)/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto& ws = workspace();
                 const std::string channel = req.matches[1];
                 const int level = path_int(req.matches[2], "level");
                 const int tx = path_int(req.matches[3], "tx");
                 const int ty = path_int(req.matches[4], "ty");
                 if (!ws.meta().has_channel(channel)) {
                   fail(ErrorKind::kNotFound, "unknown channel '" + channel + "'", channel);
                 }
                 if (level < 0 || level >= ws.meta().levels) {
                   fail(ErrorKind::kNotFound, "level " + std::to_string(level) + " out of range",
                        "level");
                 }
                 if (tx < 0 || ty < 0 || tx >= ws.meta().tiles_x(level) ||
                     ty >= ws.meta().tiles_y(level)) {
                   fail(ErrorKind::kNotFound, "tile out of range", "tile");
                 }
                 const PlaneU16 tile = ws.dataset().read_tile(channel, level, tx, ty);
                 const Bytes png = encode_png_gray16(tile);
                 res.set_content(reinterpret_cast<const char*>(png.data()), png.size(),
                                 "image/png");
               }));

    server.Post("/api/render", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto& ws = workspace();
      const json body = parse_body(req);
      const auto [viewport, context, lens] = render_request(body);
      const CellOverlay overlay = ws.overlay();
      const RgbaPlane img = render_viewport(ws.dataset(), viewport, context, lens,
                                            ws.has_cells() ? &overlay : nullptr);
      const Bytes png = encode_png_rgba(img);
      res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
    }));

    server.Get("/api/lens/stats", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto& ws = workspace();
      const std::string shape = req.has_param("shape") ? req.get_param_value("shape") : "circle";
      LensGeometry g;
      g.shape = parse_lens_shape(shape);
      g.center = {query_number(req, "cx"), query_number(req, "cy")};
      if (g.shape == LensShape::kCircle) {
        g.radius = query_number(req, "r");
      } else {
        g.half_w = query_number(req, "half_w");
        g.half_h = query_number(req, "half_h");
      }
      g.validate(/*allow_zero=*/true);
      const std::vector<std::string> channels =
          req.has_param("channels") ? split_list(req.get_param_value("channels"))
                                    : ws.default_stats_channels();
      const TypeOrder order =
          req.has_param("mode") ? parse_type_order(req.get_param_value("mode")) : TypeOrder::kLocked;
      send_json(res, to_json(ws.stats(g, channels, order)));
    }));

    server.Post("/api/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto& ws = workspace();
      const json body = parse_body(req);
      const SearchRequest sr = search_request_from_json(body);
      const std::string scope = body.contains("scope") && body["scope"].is_string()
                                    ? body["scope"].get<std::string>()
                                    : "viewport";
      if (scope == "viewport") {
        if (!body.contains("viewport")) {
          fail(ErrorKind::kSchema, "/viewport: required for viewport scope", "/viewport");
        }
        const RegionRect vp = region_from_json(body["viewport"], "/viewport");
        send_json(res, to_geojson(search_viewport(ws.dataset(), vp, sr)));
      } else if (scope == "whole") {
        send_json(res, {{"job_id", launch_search(sr)}, {"state", "pending"}}, 202);
      } else {
        fail(ErrorKind::kSchema, "/scope: expected 'viewport' or 'whole'", "/scope");
      }
    }));

    server.Get(R"(/api/search/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 workspace();
                 const std::string id = req.matches[1];
                 std::lock_guard lock(jobs_mutex);
                 auto it = jobs.find(id);
                 if (it == jobs.end()) fail(ErrorKind::kNotFound, "no search job '" + id + "'", id);
                 json j = {{"job_id", id}, {"state", it->second.state}};
                 if (it->second.state == "done") j["result"] = it->second.result;
                 if (it->second.state == "failed") j["error"] = it->second.error;
                 send_json(res, j);
               }));

    server.Get("/api/snapshots", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string q = req.has_param("query") ? req.get_param_value("query") : "";
      json arr = json::array();
      for (const auto& s : snapshots().list(q)) arr.push_back(to_json(s));
      send_json(res, arr);
    }));

    server.Post("/api/snapshots", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto& ws = workspace();
      const json body = parse_body(req);
      if (!body.is_object()) fail(ErrorKind::kSchema, "/: expected an object", "/");
      const CaptureState state = capture_state_from_json(
          body.contains("state") ? body["state"] : json(nullptr), "/state");
      const std::string title = body.value("title", "");
      const std::string description = body.value("description", "");
      const RichSnapshot snap = snapshots().add(create_snapshot(ws, state, title, description));
      send_json(res, to_json(snap), 201);
    }));

    server.Get(R"(/api/snapshots/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, to_json(snapshots().get(std::string(req.matches[1]))));
               }));

    server.Get(R"(/api/snapshots/([^/]+)/thumbnail)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const RichSnapshot s = snapshots().get(std::string(req.matches[1]));
                 res.set_content(reinterpret_cast<const char*>(s.thumbnail_png.data()),
                                 s.thumbnail_png.size(), "image/png");
               }));

    server.Get(R"(/api/snapshots/([^/]+)/restore)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const RichSnapshot s = snapshots().get(std::string(req.matches[1]));
                 const bool trust = req.has_param("trust_stats") &&
                                    req.get_param_value("trust_stats") != "false" &&
                                    req.get_param_value("trust_stats") != "0";
                 json j = to_json(restore(s, workspace(), trust));
                 if (trust) j["stats"] = to_json(s.stats);
                 send_json(res, j);
               }));

    server.Delete(R"(/api/snapshots/([^/]+))",
                  guarded([this](const httplib::Request& req, httplib::Response& res) {
                    snapshots().remove(std::string(req.matches[1]));
                    res.status = 204;
                  }));

    server.Post(R"(/api/snapshots/([^/]+)/extend_search)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const RichSnapshot s = snapshots().get(std::string(req.matches[1]));
                  double threshold = kDefaultSearchThreshold;
                  if (!req.body.empty()) {
                    const json body = parse_body(req);
                    if (body.contains("threshold")) {
                      if (!body["threshold"].is_number()) {
                        fail(ErrorKind::kSchema, "/threshold: expected a number", "/threshold");
                      }
                      threshold = body["threshold"].get<double>();
                    }
                  }
                  const ExtendResult r =
                      extend_search(workspace(), s, threshold, options.search_tile_size);
                  json prov = json::array();
                  for (const auto& p : r.provisional) prov.push_back(to_json(p));
                  send_json(res, {{"contours", to_geojson(r.contours)}, {"provisional", prov}});
                }));
  }

  struct RenderInputs {
    RegionRect viewport;
    ChannelSet context;
    std::optional<LensState> lens;
  };

  RenderInputs render_request(const json& body) {
    if (!body.is_object()) fail(ErrorKind::kSchema, "/: expected an object", "/");
    if (!body.contains("viewport")) fail(ErrorKind::kSchema, "/viewport: missing field", "/viewport");
    if (!body.contains("context")) fail(ErrorKind::kSchema, "/context: missing field", "/context");
    RenderInputs in;
    in.viewport = region_from_json(body["viewport"], "/viewport");
    in.context = channel_set_from_json(body["context"], "/context");
    if (body.contains("lens") && !body["lens"].is_null()) {
      in.lens = lens_state_from_json(body["lens"], "/lens");
    }
    return in;
  }

  std::string launch_search(const SearchRequest& sr) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "job-%06llu",
                  static_cast<unsigned long long>(++job_counter));
    const std::string id = buf;
    {
      std::lock_guard lock(jobs_mutex);
      jobs[id] = Job{};
    }
    auto keep = ws;
    const int tile = options.search_tile_size;
    std::lock_guard lock(jobs_mutex);
    workers.emplace_back([this, keep, sr, id, tile] {
      Job done;
      try {
        done.result = to_geojson(search_whole_image(keep->dataset(), sr, tile));
        done.state = "done";
      } catch (const Error& e) {
        done.state = "failed";
        done.error = to_json(to_api_error(e));
      } catch (const std::exception& e) {
        done.state = "failed";
        done.error = to_json(ApiError{500, "internal", e.what(), ""});
      }
      std::lock_guard inner(jobs_mutex);
      jobs[id] = std::move(done);
    });
    return id;
  }
};

Service::Service(std::shared_ptr<const Workspace> workspace, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(workspace), std::move(options))) {}

Service::~Service() = default;

int Service::bind() {
  if (impl_->bound_port >= 0) return impl_->bound_port;
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(o.host);
  } else if (impl_->server.bind_to_port(o.host, o.port)) {
    impl_->bound_port = o.port;
  }
  if (impl_->bound_port < 0) {
    fail(ErrorKind::kIo,
         "cannot listen on " + o.host + ":" + std::to_string(o.port) + " (port in use?)",
         std::to_string(o.port));
  }
  return impl_->bound_port;
}

void Service::run() {
  bind();
  impl_->server.listen_after_bind();
}

int Service::start() {
  const int p = bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return p;
}

void Service::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int Service::port() const { return impl_->bound_port; }

}  // namespace tissuelens
