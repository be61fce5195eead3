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

#include <stdexcept>
#include <string>
#include <string_view>

namespace tissuelens {

/// Failure categories raised by the engine. Each kind maps to exactly one
/// service error code and one CLI exit code (see service.hpp, tools/).
enum class ErrorKind {
  kInvalidArgument,  // malformed input or violated precondition
  kBounds,           // region or index outside the addressed plane
  kLookup,           // unknown channel / type / column name
  kDegenerate,       // statistic undefined for the data (e.g. flat channel)
  kNotFound,         // missing resource (tile, snapshot, job)
  kSchema,           // meta.json / CSV header does not validate
  kIntegrity,        // stored data inconsistent (tile size, CSV vs mask)
  kVersion,          // persisted format version we cannot migrate
  kConflict,         // dataset identity mismatch
  kCapability,       // dataset lacks the requested capability (no mask)
  kIo,               // filesystem failure
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string detail = {});

  ErrorKind kind() const noexcept { return kind_; }
  /// Field path, tile name, missing IDs... whatever pins down the failure.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, std::string message,
                       std::string detail = {});

}  // namespace tissuelens
