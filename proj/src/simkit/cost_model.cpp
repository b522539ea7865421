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

#include "genie/simkit/cost_model.h"

#include <cmath>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::simkit {

namespace {

double lookup(const std::map<double, double> &table, double key, const char *what) {
  const double eps = 1e-9 * std::max(1.0, std::fabs(key));
  if (table.empty() || !(key >= table.begin()->first - eps) || !(key <= table.rbegin()->first + eps)) {
    throw Error("UnknownCandidate", fmt::format("{} {} is outside the calibrated range", what, key));
  }
  auto hi = table.lower_bound(key - eps);
  if (hi == table.end()) return table.rbegin()->second;
  if (std::fabs(hi->first - key) <= eps || hi == table.begin()) return hi->second;
  auto lo = std::prev(hi);
  double w = (key - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

}  // namespace

const CostModel &CostModel::defaults() {
  static const CostModel m;
  return m;
}

double CostModel::f(double s) const { return lookup(spatial_factor, s, "spatial_res"); }

double CostModel::g(double dt) const {
  if (!(dt > 0.0)) throw Error("UnknownCandidate", fmt::format("temporal_res {} is not positive", dt));
  if (dt >= 1.0) return (1.0 + step_weight / dt) / (1.0 + step_weight);
  return 1.0 / dt;
}

double CostModel::a_spatial(double s) const { return lookup(spatial_accuracy, s, "spatial_res"); }
double CostModel::a_temporal(double dt) const { return lookup(temporal_accuracy, dt, "temporal_res"); }
double CostModel::a_particles(double n) const { return lookup(particle_accuracy, n, "particle_count"); }

double CostModel::particle_multiplier(double s) const { return f(s) / f(0.1); }

double CostModel::area_hours(const gridstore::Domain &domain, const std::vector<gridstore::Extent> &extents) const {
  double total = 0.0;
  for (const auto &e : extents) {
    if (e.empty()) continue;
    total += domain.area_km2(e.rect) * gridstore::seconds_hours(e.t1 - e.t0);
  }
  return total;
}

Estimate CostModel::plume(const gridstore::Domain &domain, const std::vector<gridstore::Extent> &extents, double s,
                          double dt, double particles) const {
  Estimate e;
  e.seconds = plume_c * area_hours(domain, extents) * f(s) * (particles / 1000.0) * g(dt);
  e.accuracy = a_spatial(s) * a_temporal(dt) * a_particles(particles);
  return e;
}

Estimate CostModel::fire(const gridstore::Domain &domain, const std::vector<gridstore::Extent> &extents, double s,
                         double dt) const {
  Estimate e;
  e.seconds = fire_c * area_hours(domain, extents) * f(s) * g(dt);
  e.accuracy = a_spatial(s) * a_temporal(dt);
  return e;
}

}  // namespace genie::simkit
