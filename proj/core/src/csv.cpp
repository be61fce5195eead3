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

#include "tissuelens/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "tissuelens/error.hpp"
#include "tissuelens/plane_io.hpp"

namespace tissuelens {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CellCsv read_cells_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& channels) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kNotFound, "cannot open " + path.string(), path.string());
  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorKind::kSchema, path.string() + ": missing header row", "header");
  }
  std::vector<std::string> header = split_csv_line(line);
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(trim(header[i]), i);

  auto need = [&](const std::string& name) {
    auto it = col.find(name);
    if (it == col.end()) {
      fail(ErrorKind::kSchema, path.string() + ": missing column '" + name + "'", name);
    }
    return it->second;
  };
  const std::size_t id_col = need("CellID");
  const std::size_t x_col = need("X");
  const std::size_t y_col = need("Y");
  std::vector<std::size_t> ch_cols;
  for (const auto& c : channels) ch_cols.push_back(need(c));
  std::optional<std::size_t> type_col;
  if (auto it = col.find("CellType"); it != col.end()) type_col = it->second;

  CellCsv csv;
  csv.channels = channels;
  csv.has_type = type_col.has_value();

  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() < header.size()) {
      fail(ErrorKind::kSchema,
           path.string() + ": row " + std::to_string(row_no) + " has " +
               std::to_string(fields.size()) + " fields, header has " +
               std::to_string(header.size()),
           "row " + std::to_string(row_no));
    }
    auto number = [&](std::size_t c) {
      const std::string f = trim(fields[c]);
      double v = 0.0;
      auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        fail(ErrorKind::kSchema,
             path.string() + ": row " + std::to_string(row_no) + ", column '" +
                 trim(header[c]) + "': not a number '" + f + "'",
             "row " + std::to_string(row_no) + "/" + trim(header[c]));
      }
      return v;
    };
    CellRow row;
    const double id = number(id_col);
    if (id < 1 || id > 4294967295.0 || id != static_cast<double>(static_cast<std::uint64_t>(id))) {
      fail(ErrorKind::kSchema,
           path.string() + ": row " + std::to_string(row_no) + ": CellID must be a positive integer",
           "row " + std::to_string(row_no) + "/CellID");
    }
    row.id = static_cast<std::uint32_t>(id);
    row.x = number(x_col);
    row.y = number(y_col);
    for (auto c : ch_cols) row.means.push_back(number(c));
    if (type_col) {
      std::string t = trim(fields[*type_col]);
      if (!t.empty()) row.type = std::move(t);
    }
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

void write_cells_csv(const std::filesystem::path& path, const CellCsv& csv) {
  std::ostringstream out;
  out << "CellID,X,Y";
  for (const auto& c : csv.channels) out << ',' << quote_if_needed(c);
  if (csv.has_type) out << ",CellType";
  out << '\n';
  for (const auto& r : csv.rows) {
    out << r.id << ',' << format_double(r.x) << ',' << format_double(r.y);
    for (double m : r.means) out << ',' << format_double(m);
    if (csv.has_type) out << ',' << quote_if_needed(r.type.value_or(""));
    out << '\n';
  }
  write_text_file_atomic(path, out.str());
}

}  // namespace tissuelens
