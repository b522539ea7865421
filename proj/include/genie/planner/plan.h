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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genie/catalog/catalog.h"
#include "genie/coverage/coverage.h"
#include "genie/planner/optimizer.h"
#include "genie/planner/requirements.h"
#include "genie/simkit/adapter.h"

namespace genie::planner {

using gridstore::Extent;
using gridstore::QRect;

enum class StepKind { Generate, Aggregate, Ensemble, Answer };

const char *step_name(StepKind k);

/// Cells of one attribute on one grid: the union of `rects` times [t0, t1).
struct GridTarget {
  Attribute attribute;
  std::vector<QRect> rects;
  std::int64_t t0 = 0;
  std::int64_t t1 = 0;
  int sres = 1;
  std::int64_t tres = 3600;

  coverage::GridRequest request() const;
  std::vector<Extent> extents() const;
};

struct PlanStep {
  StepKind kind = StepKind::Generate;
  Attribute attribute;
  int sres = 1;
  std::int64_t tres = 3600;
  std::vector<Extent> extents;  // gaps for Generate, the read region otherwise

  // Generate
  std::string simulator;
  simkit::ParamMap params;
  std::vector<Attribute> inputs;
  bool member = false;  // ensemble member: combined by a later Ensemble step
  simkit::Estimate estimate;

  // Ensemble
  std::vector<std::string> members;
  std::vector<double> weights;
};

/// An ordered list of steps; upstream Generate steps come first.
struct ExecutionPlan {
  int epoch = 1;
  std::vector<PlanStep> steps;
  std::vector<GridTarget> targets;  // what the Answer step reads

  std::size_t generate_count() const;
  double estimated_seconds() const;
  /// Lowest estimated accuracy of the Generate steps (1 when none).
  double estimated_accuracy() const;
  nlohmann::json to_json(const gridstore::Domain &domain) const;
  /// Step list with extents, parameters and estimates, one line each.
  std::string explain(const gridstore::Domain &domain) const;
};

struct PlanInputs {
  const catalog::Catalog &catalog;
  const coverage::CoverageMap &coverage;
  const simkit::AdapterRegistry &adapters;
  const simkit::SimContext &sim;
};

/// Upstream data is requested at the consumer's spatial resolution and at
/// least this temporal resolution.
inline constexpr std::int64_t kUpstreamMinTres = 3600;

/// Query rectangles and [t0, t1) relative to the domain. `clip`, when set,
/// restricts the rectangles to cells inside it.
GridTarget target_of(const RequirementSpec &req, const gridstore::Domain &domain, const Attribute &attr, int sres,
                     std::int64_t tres, const std::vector<QRect> *clip = nullptr);

/// Plans one epoch: for each requested attribute (dependencies first),
/// Generate over the gaps only, Aggregate where finer data serves the
/// request, Ensemble for weighted multi-simulator columns, then Answer.
/// Errors propagate from the catalog, coverage map and adapters.
ExecutionPlan build_plan(const RequirementSpec &req, const ParameterAssignment &assignment, const PlanInputs &in,
                         int epoch = 1, const std::vector<QRect> *clip = nullptr);

}  // namespace genie::planner
