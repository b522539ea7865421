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
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genie/gridstore/geometry.h"
#include "genie/gridstore/grid_field.h"
#include "genie/gridstore/spatial_index.h"

namespace genie::coverage {

using gridstore::Attribute;
using gridstore::Extent;
using gridstore::QRect;

struct CoverageEntry {
  std::uint64_t id = 0;
  Attribute attribute;
  Extent extent;  // quanta and seconds relative to the domain
  int sres = 1;
  std::int64_t tres = 3600;
  std::string param_signature;
  int epoch = 1;
  std::int64_t created_at = 0;  // unix seconds
  double runtime_s = 0.0;
  std::uint64_t invocation = 0;
};

/// A cell request: the union of `rects`, grown to whole cells of `sres`,
/// times [t0, t1) grown to whole steps of `tres`.
struct GridRequest {
  Attribute attribute;
  std::vector<QRect> rects;
  std::int64_t t0 = 0;
  std::int64_t t1 = 0;
  int sres = 1;
  std::int64_t tres = 3600;
  std::string param_signature;  // only consulted in strict mode
};

/// Uncovered cells coalesced into disjoint aligned boxes × intervals.
struct GapSet {
  std::vector<Extent> gaps;
  int sres = 1;
  std::int64_t tres = 3600;

  bool empty() const { return gaps.empty(); }
  /// Number of requested (cell, step) pairs inside the gaps.
  std::size_t cell_count() const;
};

struct ReuseReport {
  double covered_fraction = 0.0;
  bool spatial = false;
  bool temporal = false;
  bool resolution = false;
  std::size_t avoided_invocations = 0;
  std::size_t requested_cells = 0;
  std::size_t covered_cells = 0;

  std::vector<std::string> kinds() const;
};

/// An entry satisfies a request cell when it contains the cell and its
/// resolutions divide the requested ones (so its cells tile the request).
bool satisfies(const CoverageEntry &e, int sres, std::int64_t tres);

/// Per-step uncovered masks → rectangles, then identical rectangles of
/// consecutive steps merged. Exposed for the benchmark and tests.
GapSet find_gaps_kernel(const gridstore::Domain &domain, const GridRequest &req,
                        const std::vector<const CoverageEntry *> &candidates, bool parallel);

/// The State Manager's coverage map.
class CoverageMap {
 public:
  explicit CoverageMap(gridstore::Domain domain, bool strict_signature = false,
                       std::optional<std::filesystem::path> file = std::nullopt);

  const gridstore::Domain &domain() const { return domain_; }
  void set_clock(std::function<std::int64_t()> clock) { clock_ = std::move(clock); }
  std::int64_t now() const;

  /// Stores `entry` (assigning id and, if zero, created_at). Returns the id.
  std::uint64_t record(CoverageEntry entry);

  GapSet find_gaps(const GridRequest &req) const;
  /// As find_gaps, also treating `pending` (not yet recorded) as coverage.
  GapSet find_gaps(const GridRequest &req, const std::vector<CoverageEntry> &pending) const;
  GapSet find_gaps_serial(const GridRequest &req) const;
  ReuseReport classify_reuse(const GridRequest &req) const;

  /// Removes every entry of `attr` overlapping `rect`. Returns the count.
  std::size_t invalidate(const Attribute &attr, const QRect &rect);
  void clear();

  std::vector<CoverageEntry> entries() const;
  std::vector<CoverageEntry> entries(const Attribute &attr) const;

  /// Entries as GeoJSON polygons with res/epoch/age properties.
  nlohmann::json geojson(const std::optional<Attribute> &attr = std::nullopt) const;

 private:
  std::vector<const CoverageEntry *> candidates(const GridRequest &req) const;
  void save() const;
  void load();

  gridstore::Domain domain_;
  bool strict_;
  std::optional<std::filesystem::path> file_;
  std::vector<CoverageEntry> entries_;
  gridstore::SpatialIndex index_;
  std::uint64_t next_id_ = 1;
  std::function<std::int64_t()> clock_;
  mutable std::shared_mutex mu_;
};

}  // namespace genie::coverage
