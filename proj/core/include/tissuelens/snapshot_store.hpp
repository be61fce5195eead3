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
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "tissuelens/snapshot.hpp"

namespace tissuelens {

constexpr int kSnapshotSchemaVersion = 1;

struct SnapshotFile {
  int schema_version = kSnapshotSchemaVersion;
  std::string dataset_meta_hash;
  std::vector<RichSnapshot> snapshots;
  friend bool operator==(const SnapshotFile&, const SnapshotFile&) = default;
};

/// Atomic write (temporary file, then rename).
void save_store(const std::filesystem::path& path, const SnapshotFile& file);

/// kNotFound for a missing file, kIntegrity for unparseable or truncated
/// content, kVersion for an unknown schema_version, kSchema for bad fields.
SnapshotFile load_store(const std::filesystem::path& path);

struct SnapshotExportPaths {
  std::filesystem::path json;
  std::filesystem::path png;
};

/// Writes one snapshot as a standalone pair in `dir`: `<id>.json` holding
/// the record with the thumbnail referenced by file name, and `<id>.png`.
SnapshotExportPaths export_snapshot(const RichSnapshot& snapshot,
                                    const std::filesystem::path& dir);

/// Reads a pair written by export_snapshot. kNotFound when either file is
/// missing, kIntegrity for unparseable content, kSchema for bad fields.
RichSnapshot import_snapshot(const std::filesystem::path& json_path);

/// File-backed collection in capture order. Writers are serialized and every
/// mutation is persisted before it becomes visible to readers.
class SnapshotStore {
 public:
  /// Loads `path` when it exists, otherwise starts empty.
  SnapshotStore(std::filesystem::path path, std::string dataset_meta_hash);

  std::vector<RichSnapshot> list(std::string_view query = {}) const;
  /// kNotFound for an unknown id.
  RichSnapshot get(std::string_view id) const;
  bool contains(std::string_view id) const;
  std::size_t size() const;

  /// Stores a copy with provisional cleared; kConflict on a duplicate id.
  RichSnapshot add(RichSnapshot snapshot);
  void remove(std::string_view id);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mutex_;
  SnapshotFile file_;
};

}  // namespace tissuelens
