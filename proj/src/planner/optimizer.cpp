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

#include "genie/planner/optimizer.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::planner {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

void check_candidate(const catalog::ParameterSpec &spec, const std::string &simulator, double v) {
  if (spec.candidates.empty()) {
    if (!(v > 0.0)) {
      throw Error("HintOutOfDomain", fmt::format("hint {}={} for '{}' must be positive", spec.name, v, simulator));
    }
    return;
  }
  for (double c : spec.candidates) {
    if (near(c, v)) return;
  }
  std::string list;
  for (double c : spec.candidates) list += (list.empty() ? "" : ", ") + fmt::format("{}", c);
  throw Error("HintOutOfDomain",
              fmt::format("hint {}={} is not a candidate of '{}' ({})", spec.name, v, simulator, list));
}

std::vector<catalog::SimulatorRegistration> closure(const RequirementSpec &req, const catalog::Catalog &catalog) {
  std::vector<catalog::SimulatorRegistration> out;
  std::set<std::string> seen;
  for (const auto &attr : req.attributes) {
    for (const auto &node : catalog.topo_order(attr)) {
      for (const auto &sim : node.simulators) {
        if (seen.insert(sim.name).second) out.push_back(sim);
      }
    }
  }
  return out;
}

ParameterAssignment assign(const RequirementSpec &req, const catalog::Catalog &catalog, double s, double t,
                           bool apply_hints) {
  ParameterAssignment a;
  a.spatial_res = s;
  a.temporal_res = t;
  if (apply_hints) {
    if (auto h = req.hint("spatial_res")) a.spatial_res = *h;
    if (auto h = req.hint("temporal_res")) a.temporal_res = *h;
  }
  for (const auto &sim : closure(req, catalog)) {
    simkit::ParamMap p;
    for (const auto &spec : sim.parameters) {
      if (spec.derived) continue;
      if (spec.default_value) p[spec.name] = *spec.default_value;
    }
    p["spatial_res"] = a.spatial_res;
    p["temporal_res"] = a.temporal_res;
    if (apply_hints) {
      for (const auto &spec : sim.parameters) {
        if (spec.derived) continue;
        if (auto h = req.hint(sim.name, spec.name)) {
          check_candidate(spec, sim.name, *h);
          p[spec.name] = *h;
        }
      }
    }
    a.params[sim.name] = std::move(p);
  }
  return a;
}

}  // namespace

const simkit::ParamMap &ParameterAssignment::of(const std::string &simulator) const {
  auto it = params.find(simulator);
  if (it == params.end()) throw Error("UnknownSimulator", fmt::format("no parameters for '{}'", simulator));
  return it->second;
}

std::pair<double, double> class_resolution(AccuracyClass c) {
  switch (c) {
    case AccuracyClass::Overview: return {0.2, 3.0};
    case AccuracyClass::Regional: return {0.05, 1.0};
    case AccuracyClass::Point: return {0.02, 0.5};
  }
  return {0.05, 1.0};
}

ParameterAssignment select_parameters(const RequirementSpec &req, const catalog::Catalog &catalog) {
  auto [s, t] = class_resolution(req.accuracy_class);
  ParameterAssignment a = assign(req, catalog, s, t, true);
  a.source = req.hint("spatial_res") || req.hint("temporal_res") ? "hint" : "heuristic";
  return a;
}

ParameterAssignment fixed_parameters(const RequirementSpec &req, const catalog::Catalog &catalog, double spatial_res,
                                     double temporal_res) {
  ParameterAssignment a = assign(req, catalog, spatial_res, temporal_res, false);
  a.source = "static";
  return a;
}

std::size_t argmin_feasible(const std::vector<Candidate> &candidates, double q) {
  std::optional<std::size_t> best;
  auto spatial = [](const Candidate &c) {
    auto it = c.params.find("spatial_res");
    return it == c.params.end() ? 0.0 : it->second;
  };
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto &c = candidates[i];
    if (!(c.accuracy >= q)) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto &b = candidates[*best];
    if (c.seconds != b.seconds) {
      if (c.seconds < b.seconds) best = i;
    } else if (c.accuracy != b.accuracy) {
      if (c.accuracy > b.accuracy) best = i;
    } else if (spatial(c) < spatial(b)) {
      best = i;
    }
  }
  if (!best) {
    double top = 0.0;
    for (const auto &c : candidates) top = std::max(top, c.accuracy);
    throw Error("Infeasible", fmt::format("no candidate reaches accuracy {:.3f} (best {:.3f} of {})", q, top,
                                          candidates.size()));
  }
  return *best;
}

std::vector<simkit::ParamMap> candidate_grid(const std::vector<catalog::ParameterSpec> &specs) {
  std::vector<simkit::ParamMap> out{simkit::ParamMap{}};
  for (const auto &spec : specs) {
    if (spec.derived) continue;
    std::vector<double> values = spec.candidates;
    if (values.empty() && spec.default_value) values.push_back(*spec.default_value);
    if (values.empty()) continue;
    std::vector<simkit::ParamMap> next;
    next.reserve(out.size() * values.size());
    for (const auto &p : out) {
      for (double v : values) {
        auto q = p;
        q[spec.name] = v;
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

OptimizeResult optimize_parameters(const simkit::Adapter &adapter, const std::vector<catalog::ParameterSpec> &specs,
                                   const gridstore::Domain &domain, const std::vector<gridstore::Extent> &extents,
                                   double q, const simkit::CostModel &cost) {
  std::vector<Candidate> table;
  for (auto &p : candidate_grid(specs)) {
    auto e = adapter.estimate(domain, p, extents, cost);
    table.push_back(Candidate{std::move(p), e.seconds, e.accuracy});
  }
  std::size_t i = argmin_feasible(table, q);
  OptimizeResult r;
  r.params = table[i].params;
  r.estimate = simkit::Estimate{table[i].seconds, table[i].accuracy};
  r.evaluated = table.size();
  return r;
}

}  // namespace genie::planner
