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
#include <string>
#include <vector>

#include "genie/catalog/catalog.h"
#include "genie/planner/requirements.h"
#include "genie/simkit/adapter.h"

namespace genie::planner {

/// Parameter values per simulator, plus the grid they imply.
struct ParameterAssignment {
  std::map<std::string, simkit::ParamMap> params;  // simulator -> parameter -> value
  double spatial_res = 0.1;   // degrees
  double temporal_res = 1.0;  // hours
  std::string source;         // heuristic, hint, optimizer, static

  const simkit::ParamMap &of(const std::string &simulator) const;
};

/// Spatial (degrees) and temporal (hours) resolution of each class.
std::pair<double, double> class_resolution(AccuracyClass c);

/// Class heuristics, then catalog defaults for the remaining parameters,
/// then hints. Covers every simulator in the dependency closure of the
/// requested attributes. Errors: HintOutOfDomain.
ParameterAssignment select_parameters(const RequirementSpec &req, const catalog::Catalog &catalog);

/// The same closure with fixed spatial/temporal values (static modes).
ParameterAssignment fixed_parameters(const RequirementSpec &req, const catalog::Catalog &catalog, double spatial_res,
                                     double temporal_res);

struct Candidate {
  simkit::ParamMap params;
  double seconds = 0.0;
  double accuracy = 0.0;
};

/// Index of the cheapest candidate with accuracy >= q. Ties go to higher
/// accuracy, then finer spatial_res, then the earlier candidate.
/// Errors: Infeasible.
std::size_t argmin_feasible(const std::vector<Candidate> &candidates, double q);

/// Cross product of every non-derived parameter's candidates, in
/// registration order with the first parameter varying slowest.
std::vector<simkit::ParamMap> candidate_grid(const std::vector<catalog::ParameterSpec> &specs);

struct OptimizeResult {
  simkit::ParamMap params;
  simkit::Estimate estimate;
  std::size_t evaluated = 0;
};

/// min T(P) subject to A(P) >= q over the candidate grid of `specs`, with
/// T and A from the adapter's estimate. Errors: Infeasible.
OptimizeResult optimize_parameters(const simkit::Adapter &adapter, const std::vector<catalog::ParameterSpec> &specs,
                                   const gridstore::Domain &domain, const std::vector<gridstore::Extent> &extents,
                                   double q, const simkit::CostModel &cost);

}  // namespace genie::planner
