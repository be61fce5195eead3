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

#include "tissuelens/snapshot_store.hpp"

#include <algorithm>
#include <cctype>
#include <span>
#include <mutex>

#include "tissuelens/error.hpp"
#include "tissuelens/json_io.hpp"
#include "tissuelens/plane_io.hpp"

namespace tissuelens {

void save_store(const std::filesystem::path& path, const SnapshotFile& file) {
  json snaps = json::array();
  for (const auto& s : file.snapshots) snaps.push_back(to_json(s));
  const json j = {{"schema_version", file.schema_version},
                  {"dataset_meta_hash", file.dataset_meta_hash},
                  {"snapshots", std::move(snaps)}};
  write_text_file_atomic(path, j.dump(1));
}

SnapshotFile load_store(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    fail(ErrorKind::kNotFound, "no snapshot store at " + path.string(), path.string());
  }
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kIntegrity, "snapshot store " + path.string() + " is truncated or corrupt",
         path.string());
  }
  if (!j.is_object() || !j.contains("schema_version") || !j.contains("snapshots")) {
    fail(ErrorKind::kIntegrity, "snapshot store " + path.string() + " is incomplete",
         path.string());
  }
  const json& v = j["schema_version"];
  if (!v.is_number_integer() || v.get<std::int64_t>() != kSnapshotSchemaVersion) {
    fail(ErrorKind::kVersion,
         "snapshot store schema_version " + v.dump() + " needs migration to version " +
             std::to_string(kSnapshotSchemaVersion),
         "/schema_version");
  }
  SnapshotFile file;
  if (j.contains("dataset_meta_hash") && j["dataset_meta_hash"].is_string()) {
    file.dataset_meta_hash = j["dataset_meta_hash"].get<std::string>();
  }
  const json& arr = j["snapshots"];
  if (!arr.is_array()) fail(ErrorKind::kSchema, "/snapshots: expected an array", "/snapshots");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    file.snapshots.push_back(snapshot_from_json(arr[i], "/snapshots/" + std::to_string(i)));
  }
  return file;
}

namespace {

std::string file_stem_for(std::string_view id) {
  std::string out(id);
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

}  // namespace

SnapshotExportPaths export_snapshot(const RichSnapshot& snapshot,
                                    const std::filesystem::path& dir) {
  const std::string stem = file_stem_for(snapshot.id);
  SnapshotExportPaths paths{dir / (stem + ".json"), dir / (stem + ".png")};
  json j = to_json(snapshot);
  j.erase("thumbnail_png");
  j["thumbnail_file"] = paths.png.filename().string();
  j["schema_version"] = kSnapshotSchemaVersion;
  write_binary_file(paths.png, snapshot.thumbnail_png);
  write_text_file_atomic(paths.json, j.dump(1));
  return paths;
}

RichSnapshot import_snapshot(const std::filesystem::path& json_path) {
  if (!std::filesystem::exists(json_path)) {
    fail(ErrorKind::kNotFound, "no exported snapshot at " + json_path.string(),
         json_path.string());
  }
  json j;
  try {
    j = json::parse(read_text_file(json_path));
  } catch (const json::parse_error&) {
    fail(ErrorKind::kIntegrity, "exported snapshot " + json_path.string() + " is corrupt",
         json_path.string());
  }
  if (!j.is_object()) fail(ErrorKind::kSchema, "expected an object", "");
  if (j.contains("schema_version") &&
      (!j["schema_version"].is_number_integer() ||
       j["schema_version"].get<std::int64_t>() != kSnapshotSchemaVersion)) {
    fail(ErrorKind::kVersion, "exported snapshot schema_version " + j["schema_version"].dump() +
                                  " is not supported", "/schema_version");
  }
  if (!j.contains("thumbnail_file") || !j["thumbnail_file"].is_string()) {
    fail(ErrorKind::kSchema, "/thumbnail_file: expected a string", "/thumbnail_file");
  }
  const auto png = json_path.parent_path() /
                   std::filesystem::path(j["thumbnail_file"].get<std::string>()).filename();
  if (!std::filesystem::exists(png)) {
    fail(ErrorKind::kNotFound, "thumbnail " + png.string() + " is missing", png.string());
  }
  const std::string bytes = read_text_file(png);
  j["thumbnail_png"] = base64_encode(std::span(
      reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
  j.erase("thumbnail_file");
  j.erase("schema_version");
  return snapshot_from_json(j);
}

SnapshotStore::SnapshotStore(std::filesystem::path path, std::string dataset_meta_hash)
    : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) file_ = load_store(path_);
  file_.dataset_meta_hash = std::move(dataset_meta_hash);
}

std::vector<RichSnapshot> SnapshotStore::list(std::string_view query) const {
  std::shared_lock lock(mutex_);
  return filter_snapshots(file_.snapshots, query);
}

RichSnapshot SnapshotStore::get(std::string_view id) const {
  std::shared_lock lock(mutex_);
  for (const auto& s : file_.snapshots) {
    if (s.id == id) return s;
  }
  fail(ErrorKind::kNotFound, "no snapshot '" + std::string(id) + "'", std::string(id));
}

bool SnapshotStore::contains(std::string_view id) const {
  std::shared_lock lock(mutex_);
  return std::any_of(file_.snapshots.begin(), file_.snapshots.end(),
                     [&](const RichSnapshot& s) { return s.id == id; });
}

std::size_t SnapshotStore::size() const {
  std::shared_lock lock(mutex_);
  return file_.snapshots.size();
}

RichSnapshot SnapshotStore::add(RichSnapshot snapshot) {
  snapshot.provisional = false;
  std::unique_lock lock(mutex_);
  for (const auto& s : file_.snapshots) {
    if (s.id == snapshot.id) {
      fail(ErrorKind::kConflict, "snapshot id '" + snapshot.id + "' already stored", snapshot.id);
    }
  }
  SnapshotFile next = file_;
  next.snapshots.push_back(snapshot);
  save_store(path_, next);
  file_ = std::move(next);
  return snapshot;
}

void SnapshotStore::remove(std::string_view id) {
  std::unique_lock lock(mutex_);
  SnapshotFile next = file_;
  auto it = std::find_if(next.snapshots.begin(), next.snapshots.end(),
                         [&](const RichSnapshot& s) { return s.id == id; });
  if (it == next.snapshots.end()) {
    fail(ErrorKind::kNotFound, "no snapshot '" + std::string(id) + "'", std::string(id));
  }
  next.snapshots.erase(it);
  save_store(path_, next);
  file_ = std::move(next);
}

}  // namespace tissuelens
