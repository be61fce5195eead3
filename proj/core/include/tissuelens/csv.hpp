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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tissuelens {

/// One row of cells.csv: CellID,X,Y,<channel means...>[,CellType].
struct CellRow {
  std::uint32_t id = 0;
  double x = 0.0;
  double y = 0.0;
  std::vector<double> means;  // in the channel order requested by the reader
  std::optional<std::string> type;
  friend bool operator==(const CellRow&, const CellRow&) = default;
};

struct CellCsv {
  std::vector<std::string> channels;
  bool has_type = false;
  std::vector<CellRow> rows;
};

/// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Reads cells.csv, picking columns by header name. Unknown extra columns
/// are ignored; CellType is optional. Missing required columns raise kSchema
/// naming the column; unparsable values raise kSchema naming row and column.
CellCsv read_cells_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& channels);

void write_cells_csv(const std::filesystem::path& path, const CellCsv& csv);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace tissuelens
