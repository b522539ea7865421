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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genie/catalog/catalog.h"
#include "genie/gridstore/store.h"
#include "genie/qlang/ast.h"

namespace genie::qlang {

enum class ColumnClass { Stored, Virtual };

struct BoundTable {
  std::string name;
  std::string visible;  // alias or name
  bool has_virtual = false;
};

struct BoundColumn {
  std::size_t table = 0;  // index into the owning scope's tables
  int depth = 0;          // 0 = own scope, 1 = enclosing query, ...
  std::string column;
  ColumnClass cls = ColumnClass::Stored;
  std::optional<catalog::VirtualColumnDef> def;
  std::optional<std::size_t> projection;  // reference to a projection alias
};

/// A SELECT with every column reference resolved. Subqueries are bound in
/// their own scope and keyed by the Expr that holds them.
struct BoundQuery {
  SelectQuery query;
  std::vector<BoundTable> tables;
  std::map<const Expr *, BoundColumn> columns;
  std::map<const Expr *, BoundQuery> subqueries;

  /// Distinct virtual attributes referenced here or in subqueries.
  std::vector<gridstore::Attribute> virtual_attributes() const;
  const BoundColumn *column(const Expr *e) const;
  std::size_t virtual_count() const;
};

/// Errors: UnknownTable, UnknownColumn, AmbiguousColumn, DuplicateAlias,
/// InvalidAggregate, InvalidPredicate.
BoundQuery bind(const SelectQuery &query, const catalog::Catalog &catalog, const gridstore::Store *store);

}  // namespace genie::qlang
