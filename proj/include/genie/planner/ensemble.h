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

#include <vector>

#include "genie/gridstore/grid_field.h"

namespace genie::planner {

/// Cellwise sum(w_i * v_i) / sum(w_i). Errors: GeometryMismatch (fields on
/// different grids or extents), ZeroWeightSum, InvalidArgument (negative
/// weight, count mismatch, no fields).
gridstore::GridField ensemble_combine(const std::vector<gridstore::GridField> &fields,
                                      const std::vector<double> &weights);

}  // namespace genie::planner
