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

#include <filesystem>
#include <memory>
#include <string>

#include "json.hpp"
#include "tissuelens/error.hpp"
#include "tissuelens/workspace.hpp"

namespace tissuelens {

/// HTTP error body: {"code", "message", "detail"}.
struct ApiError {
  int http_status = 500;
  std::string code;  // bad_request | not_found | integrity | capability | internal
  std::string message;
  std::string detail;
};

ApiError to_api_error(const Error& e);
nlohmann::json to_json(const ApiError& e);

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8000;  // 0 picks a free port
  /// Defaults to snapshots.json in the dataset directory.
  std::filesystem::path snapshot_store;
  int search_tile_size = 512;
  std::string cors_origin = "*";
};

/// One dataset per process. With a null workspace every data endpoint
/// answers 404.
class Service {
 public:
  Service(std::shared_ptr<const Workspace> workspace, ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket; kIo when the port is taken. Returns the port.
  int bind();
  /// Serves until stop(). Calls bind() first if needed.
  void run();
  /// run() on a background thread; returns once the socket is bound.
  int start();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tissuelens
