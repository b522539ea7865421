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
#include "genie/gridstore/geometry.h"
#include "genie/gridstore/store.h"
#include "genie/qlang/bind.h"

namespace genie::planner {

using gridstore::Attribute;
using gridstore::BBox;
using gridstore::TimeInterval;

enum class AccuracyClass { Overview, Regional, Point };

const char *class_name(AccuracyClass c);

struct AccuracyFloors {
  double overview = 0.85;
  double regional = 0.90;
  double point = 0.95;

  double of(AccuracyClass c) const;
};

/// Where a query needs data and how precise it has to be.
struct RequirementSpec {
  std::vector<Attribute> attributes;
  std::vector<BBox> extent;  // disjoint boxes inside the domain
  TimeInterval interval;     // closed, absolute seconds
  AccuracyClass accuracy_class = AccuracyClass::Regional;
  double accuracy_floor = 0.90;
  std::map<std::string, double> hints;           // normalized numeric hints
  std::map<std::string, std::string> text_hints;  // hints without a numeric reading

  bool aggregates = false;
  bool full_domain = false;
  std::optional<double> buffer_m;  // radius of station buffers, if any

  std::optional<double> hint(const std::string &key) const;
  /// Hint scoped to `simulator` ("hysplit.particle_count") or global.
  std::optional<double> hint(const std::string &simulator, const std::string &key) const;
};

/// Fraction of the domain the overview class starts at.
inline constexpr double kOverviewAreaFraction = 0.25;
/// Buffers at or below this radius make a point query.
inline constexpr double kPointBufferM = 2000.0;

/// Errors: ConflictingHints.
RequirementSpec extract_requirements(const qlang::BoundQuery &bound, const catalog::Catalog &catalog,
                                     const gridstore::Store &store, const AccuracyFloors &floors = {});

/// Hint entries as key -> normalized number / text. Errors: ConflictingHints.
void collect_hints(const qlang::HintClause &hint, std::map<std::string, double> &numbers,
                   std::map<std::string, std::string> &texts);

}  // namespace genie::planner
