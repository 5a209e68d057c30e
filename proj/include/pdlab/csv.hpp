// Copyright 2026 The pdlab Authors
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
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace pdlab::csv {

using Row = std::vector<std::string>;

// RFC 4180: fields holding a comma, quote, CR or LF are quoted, quotes doubled.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

// Reads every record; quoted fields may span lines. Throws
// Error{SchemaError} on an unterminated quote.
std::vector<Row> read(std::istream& in);
std::vector<Row> read_file(const std::filesystem::path& path);

// A table addressed by header name.
struct Table {
  Row header;
  std::vector<Row> rows;

  // Column index; throws Error{SchemaError} if absent.
  std::size_t column(std::string_view name) const;
  bool has(std::string_view name) const;
  const std::string& at(std::size_t row, std::string_view name) const;
};

// First record is the header; rows must match its width.
Table read_table(const std::filesystem::path& path);

}  // namespace pdlab::csv
