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

#include "tissuelens/error.hpp"

#include <utility>

namespace tissuelens {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kBounds: return "bounds";
    case ErrorKind::kLookup: return "lookup";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kNotFound: return "not_found";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kIntegrity: return "integrity";
    case ErrorKind::kVersion: return "version";
    case ErrorKind::kConflict: return "conflict";
    case ErrorKind::kCapability: return "capability";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string message, std::string detail)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      detail_(std::move(detail)) {}

void fail(ErrorKind kind, std::string message, std::string detail) {
  throw Error(kind, std::move(message), std::move(detail));
}

}  // namespace tissuelens
