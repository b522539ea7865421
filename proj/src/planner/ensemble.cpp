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

#include "genie/planner/ensemble.h"

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::planner {

gridstore::GridField ensemble_combine(const std::vector<gridstore::GridField> &fields,
                                      const std::vector<double> &weights) {
  if (fields.empty()) throw Error("InvalidArgument", "ensemble needs at least one field");
  if (fields.size() != weights.size()) {
    throw Error("InvalidArgument", fmt::format("{} fields but {} weights", fields.size(), weights.size()));
  }
  const auto &first = fields.front();
  double total = 0.0;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const auto &f = fields[k];
    if (f.sres != first.sres || f.tres != first.tres || !(f.extent == first.extent) ||
        f.values.size() != first.values.size()) {
      throw Error("GeometryMismatch", fmt::format("ensemble member {} is not on the grid of member 0", k));
    }
    if (!(weights[k] >= 0.0)) throw Error("InvalidArgument", fmt::format("weight {} is negative", weights[k]));
    total += weights[k];
  }
  if (!(total > 0.0)) throw Error("ZeroWeightSum", "ensemble weights sum to zero");

  gridstore::GridField out = first;
  for (std::size_t c = 0; c < out.values.size(); ++c) {
    double acc = 0.0;
    for (std::size_t k = 0; k < fields.size(); ++k) acc += weights[k] * fields[k].values[c];
    out.values[c] = acc / total;
  }
  return out;
}

}  // namespace genie::planner
