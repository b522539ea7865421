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
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "genie/catalog/catalog.h"
#include "genie/gridstore/store.h"
#include "genie/qlang/bind.h"

namespace genie::engine {

using gridstore::BBox;
using gridstore::GeoPoint;

struct Timestamp {
  std::int64_t t = 0;  // unix seconds
  bool operator==(const Timestamp &) const = default;
};

/// A SQL value during evaluation. Grid cells surface as boxes.
using Datum = std::variant<std::monostate, bool, std::int64_t, double, std::string, GeoPoint, BBox, Timestamp>;

bool is_null(const Datum &d);
std::optional<double> datum_number(const Datum &d);
std::string datum_text(const Datum &d);
nlohmann::json datum_json(const Datum &d);

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<std::vector<Datum>> rows;

  nlohmann::json to_json() const;
  /// Aligned text table, at most `max_rows` rows.
  std::string to_text(std::size_t max_rows = 50) const;
};

/// Answer data of one virtual table: fields on a common grid, keyed by
/// virtual column. Rows are the grid's (cell, step) pairs.
struct GridTable {
  const gridstore::GridField *grid = nullptr;
  std::map<std::string, const gridstore::GridField *> columns;
};

struct DataSource {
  const catalog::Catalog &catalog;
  const gridstore::Store &store;
  std::map<std::string, GridTable> grids;  // by table name
};

/// Streams the joined rows through filters, grouping and projection.
/// Errors: UnknownFunction, TypeMismatch, InvalidPredicate.
ResultSet evaluate(const qlang::BoundQuery &query, const DataSource &data);

/// Row-matched agreement of two answers: rows are keyed by their
/// non-floating columns, floating columns are compared pairwise. Returns
/// 1 - ||a - r|| / ||r|| over matched values (1 when both are empty).
/// Rows present in only one side count with the other side as 0.
double answer_accuracy(const ResultSet &answer, const ResultSet &reference);

}  // namespace genie::engine
