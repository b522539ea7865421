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

#include <optional>
#include <string>
#include <vector>

#include "genie/gridstore/grid_field.h"
#include "genie/planner/requirements.h"

namespace genie::planner {

enum class PlanMode { Progressive, Adaptive, Optimize, StaticHigh, StaticLow };

const char *mode_name(PlanMode m);
/// Errors: InvalidArgument.
PlanMode parse_mode(const std::string &text);

enum class EpochRegion {
  Full,           // the whole query extent
  OverThreshold,  // epoch-1 cells above the threshold
  Explicit,       // a refine request
};

struct EpochSpec {
  int epoch = 1;
  double spatial_res = 0.5;  // degrees
  double temporal_res = 6.0;  // hours
  EpochRegion region = EpochRegion::Full;
  bool optimize = false;      // parameters come from the optimizer
  bool use_hints = false;     // parameters come from the class heuristics and hints
  bool full_domain = false;   // ignore the query extent (static baselines)
};

struct EpochPlan {
  std::vector<EpochSpec> epochs;  // scheduled in order; epoch 3 runs on request only
  std::optional<double> threshold;
  PlanMode mode = PlanMode::Progressive;

  const EpochSpec *find(int epoch) const;
};

/// Progressive ladder, coarse to fine.
struct Ladder {
  double coarse_s = 0.5, coarse_t = 6.0;
  double medium_s = 0.1, medium_t = 1.0;
  double fine_s = 0.02, fine_t = 0.25;
  double high_s = 0.01, high_t = 0.25;
};

/// Epoch layout for a query. Progressive: coarse everywhere, medium on
/// over-threshold cells (when a threshold is set), fine on request.
/// Hints pin epoch 1 and suppress the automatic epoch 2. Errors: none.
EpochPlan schedule_epochs(const RequirementSpec &req, std::optional<double> refine_threshold,
                          PlanMode mode = PlanMode::Progressive, const Ladder &ladder = {});

/// Throws Error("InvalidArgument") if a later epoch is coarser than an
/// earlier one.
void check_monotone(const EpochPlan &plan);

/// (i, j) cell indices of `field` whose value exceeds `threshold` at any step.
std::vector<std::pair<int, int>> over_threshold_cells(const gridstore::GridField &field, double threshold);

/// Over-threshold cells as disjoint quantum rectangles.
std::vector<gridstore::QRect> refine_region(const gridstore::GridField &field, double threshold);

}  // namespace genie::planner
