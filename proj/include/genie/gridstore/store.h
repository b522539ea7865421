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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "genie/gridstore/grid_field.h"
#include "genie/gridstore/table.h"

namespace genie::gridstore {

/// Outcome of one materialize call. Cell counts refer to the incoming
/// field's cells, classified by who owned each cell centre beforehand.
struct MergeReport {
  std::uint64_t field_id = 0;
  std::size_t new_cells = 0;
  std::size_t replaced_cells = 0;
  std::size_t retained_cells = 0;
  std::vector<Extent> replaced;  // overlaps with coarser (or older) fields
  std::vector<Extent> retained;  // overlaps with finer fields, which keep priority
  std::vector<std::uint64_t> dropped;
  std::size_t bytes = 0;

  bool all_new() const { return replaced_cells == 0 && retained_cells == 0; }
};

struct FieldInfo {
  std::uint64_t id = 0;
  std::uint64_t seq = 0;
  Attribute attribute;
  int sres = 0;
  std::int64_t tres = 0;
  Extent extent;
  std::string param_signature;
};

/// A best-available raster: every cell holds the value of the
/// highest-priority field covering it, or NaN. `owner` names that field.
struct Painted {
  GridField field;
  std::vector<std::uint64_t> owner;  // 0 where uncovered
};

/// Stored tables plus materialized GridFields under replacement
/// consistency. Priority between fields: finer spatial resolution, then
/// finer temporal resolution, then newer.
class Store {
 public:
  explicit Store(Domain domain, std::optional<std::filesystem::path> dir = std::nullopt);

  const Domain &domain() const { return domain_; }

  StoredTable &create_table(const std::string &name, std::vector<ColumnSchema> columns);
  StoredTable *table(const std::string &name);
  const StoredTable *table(const std::string &name) const;
  std::vector<std::string> table_names() const;

  /// Throws Error("DomainExceeded") when the field leaves the domain and
  /// Error("InvalidField") for malformed fields.
  MergeReport materialize(GridField field);

  /// Best-available data on the requested grid. Only fields whose
  /// resolutions divide the request contribute; each output cell is the
  /// footprint-weighted mean of the painted sub-cells. Throws
  /// Error("CoverageMiss") if any part of an output cell has no data.
  GridField read(const Attribute &attr, const QRect &rect, std::int64_t t0, std::int64_t t1, int sres,
                 std::int64_t tres) const;

  using FieldFilter = std::function<bool(const FieldInfo &)>;

  /// Paints the accepted fields of `attr` overlapping `extent` onto the
  /// (sres, tres) grid in priority order. Every accepted field's
  /// resolutions must be multiples of the grid's.
  Painted paint(const Attribute &attr, const Extent &extent, int sres, std::int64_t tres,
                const FieldFilter &accept = {}) const;

  /// Finest grid that every accepted field overlapping `extent` nests in
  /// (gcd of their resolutions); nullopt when none overlap.
  std::optional<std::pair<int, std::int64_t>> common_grid(const Attribute &attr, const Extent &extent,
                                                          const FieldFilter &accept = {}) const;

  /// Value at quantum cell (i, j) and second t (relative), if covered.
  std::optional<double> value_at(const Attribute &attr, int i, int j, std::int64_t t) const;

  std::vector<FieldInfo> fields(const Attribute &attr) const;
  std::vector<FieldInfo> all_fields() const;
  std::optional<GridField> field(std::uint64_t id) const;

  void clear_fields();
  void drop_attribute(const Attribute &attr);
  std::size_t bytes_materialized() const;

 private:
  struct Entry {
    FieldInfo info;
    std::shared_ptr<const GridField> data;
  };

  static bool outranks(const FieldInfo &a, const FieldInfo &b);
  Painted paint_unlocked(const Attribute &attr, const Extent &extent, int sres, std::int64_t tres,
                         const FieldFilter &accept) const;
  std::optional<std::pair<int, std::int64_t>> grid_unlocked(const Attribute &attr, const Extent &extent,
                                                            const FieldFilter &accept) const;
  void write_manifest() const;
  void load();

  Domain domain_;
  std::optional<std::filesystem::path> dir_;
  std::map<std::string, StoredTable> tables_;
  std::map<Attribute, std::vector<Entry>> fields_;  // sorted by priority, best first
  std::uint64_t next_id_ = 1;
  std::uint64_t next_seq_ = 1;
  std::size_t bytes_ = 0;
  mutable std::shared_mutex mu_;
};

}  // namespace genie::gridstore
