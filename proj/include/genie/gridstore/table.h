// Copyright 2026 the genie authors
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
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "genie/gridstore/geometry.h"
#include "genie/gridstore/spatial_index.h"
#include "genie/qlang/ast.h"

namespace genie::gridstore {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  bool operator==(const GeoPoint &) const = default;
};

/// Cell value. Timestamps and booleans are stored as integers.
using Value = std::variant<std::monostate, std::int64_t, double, std::string, GeoPoint>;

std::string value_text(const Value &v);
std::optional<double> value_number(const Value &v);

struct ColumnSchema {
  std::string name;
  qlang::TypeName type;
  bool primary_key = false;
  std::optional<std::pair<std::string, std::string>> references;
};

/// A stored table. Rows with a GEOMETRY column are indexed by their first
/// geometry column.
class StoredTable {
 public:
  StoredTable() = default;
  StoredTable(std::string name, std::vector<ColumnSchema> columns);

  const std::string &name() const { return name_; }
  const std::vector<ColumnSchema> &columns() const { return columns_; }
  std::optional<std::size_t> column_index(const std::string &name) const;
  std::optional<std::size_t> geometry_column() const { return geometry_column_; }

  std::size_t row_count() const { return rows_.size(); }
  const std::vector<Value> &row(std::size_t r) const { return rows_[r]; }
  const std::vector<std::vector<Value>> &rows() const { return rows_; }

  /// Appends a row; throws Error("SchemaMismatch") on arity/type problems
  /// and Error("DuplicateKey") on primary-key collisions.
  void add_row(std::vector<Value> row);
  void clear();

  /// Row ids whose geometry point lies in `box`.
  std::vector<std::size_t> rows_in(const BBox &box) const;

  /// Names of columns that are never filled from data files.
  std::set<std::string> skip_columns;

 private:
  std::string name_;
  std::vector<ColumnSchema> columns_;
  std::vector<std::vector<Value>> rows_;
  std::optional<std::size_t> geometry_column_;
  std::set<std::string> keys_;
  SpatialIndex index_;
};

/// Loads rows from a CSV file with a header or a GeoJSON FeatureCollection
/// of points (chosen by the .json/.geojson extension). A GEOMETRY column
/// may be supplied as `lat`/`lon` (or `<col>_lat`/`<col>_lon`) CSV columns.
/// Throws Error("ParseError") naming the 1-based data row, or
/// Error("SchemaMismatch"). Returns the number of rows added.
std::size_t ingest_file(StoredTable &table, const std::filesystem::path &file);
std::size_t ingest_csv_text(StoredTable &table, const std::string &text);

/// Splits one CSV record (RFC 4180 quoting).
std::vector<std::string> split_csv_line(const std::string &line);

}  // namespace genie::gridstore
