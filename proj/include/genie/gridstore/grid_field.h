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

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "genie/gridstore/geometry.h"

namespace genie::gridstore {

/// (table, column) pair naming a virtual attribute.
struct Attribute {
  std::string table;
  std::string column;

  std::string str() const { return table + "." + column; }
  auto operator<=>(const Attribute &) const = default;
};

/// Concentrations are intensive; per-area emission rates are kept as means
/// too, the tag records which reading applies.
enum class ValueKind : std::uint8_t { Intensive = 0, Extensive = 1 };

/// A regular lat/lon/time raster. Cells are aligned to multiples of the
/// resolution from the domain origin; the last row, column or step may be
/// clipped by the domain edge.
struct GridField {
  Attribute attribute;
  int sres = 1;              // quanta
  std::int64_t tres = 3600;  // seconds
  Extent extent;             // aligned, clipped
  std::string param_signature;
  ValueKind value_kind = ValueKind::Intensive;
  std::vector<double> values;  // index (t * ni + i) * nj + j

  int ni() const { return (extent.rect.i1 - extent.rect.i0 + sres - 1) / sres; }
  int nj() const { return (extent.rect.j1 - extent.rect.j0 + sres - 1) / sres; }
  int nt() const { return static_cast<int>((extent.t1 - extent.t0 + tres - 1) / tres); }
  std::size_t cell_count() const { return static_cast<std::size_t>(ni()) * nj() * nt(); }
  std::size_t index(int t, int i, int j) const {
    return (static_cast<std::size_t>(t) * ni() + i) * nj() + j;
  }
  double &at(int t, int i, int j) { return values[index(t, i, j)]; }
  double at(int t, int i, int j) const { return values[index(t, i, j)]; }

  /// Footprint of cell (i, j), clipped to the field extent.
  QRect cell_rect(int i, int j) const;
  std::int64_t step_start(int t) const { return extent.t0 + t * tres; }
  std::int64_t step_end(int t) const { return std::min(extent.t1, extent.t0 + (t + 1) * tres); }

  /// Allocates a zero-filled field over `extent` (which must already be
  /// aligned to the resolutions).
  static GridField make(Attribute attribute, int sres, std::int64_t tres, const Extent &extent);
};

/// Throws Error("InvalidField") unless the field is aligned inside `domain`,
/// has the right value count and only finite values.
void validate(const GridField &field, const Domain &domain);

/// Block mean of `field` onto a grid `sres`×`tres` that is an integer
/// multiple of the field's. Clipped cells average the sub-cells that exist,
/// weighted by their footprint. Throws Error("NonIntegerRatio").
GridField aggregate(const GridField &field, int sres, std::int64_t tres);
GridField aggregate_serial(const GridField &field, int sres, std::int64_t tres);

}  // namespace genie::gridstore
