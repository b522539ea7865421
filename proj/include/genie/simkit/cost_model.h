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
#include <vector>

#include "genie/gridstore/geometry.h"

namespace genie::simkit {

struct Estimate {
  double seconds = 0.0;
  double accuracy = 0.0;
};

/// Runtime and accuracy model shared by the built-in adapters.
///
/// Runtime is c * area_km2 * hours * f(s) * (particles / 1000) * g(dt): f is
/// the spatial factor table, g(dt) = (1 + w / dt) / (1 + w) for dt >= 1 h and
/// 1 / dt below. Accuracy is the product of the spatial, temporal and
/// particle tables.
struct CostModel {
  double plume_c = 1.0e-3;  // seconds per km² per simulated hour at 0.01°, 1 h
  double fire_c = 1.0e-4;
  double step_weight = 7.0;

  std::map<double, double> spatial_factor{{0.01, 1.0},  {0.02, 0.5},  {0.05, 0.22},
                                          {0.1, 0.1},   {0.2, 0.09},  {0.5, 0.085}};
  std::map<double, double> spatial_accuracy{{0.01, 1.0},  {0.02, 0.99}, {0.05, 0.98},
                                            {0.1, 0.97},  {0.2, 0.95},  {0.5, 0.91}};
  std::map<double, double> temporal_accuracy{{0.25, 1.0}, {0.5, 0.97}, {1.0, 0.90}, {2.0, 0.87},
                                             {3.0, 0.87}, {4.0, 0.80}, {6.0, 0.77}};
  std::map<double, double> particle_accuracy{{250, 0.93}, {500, 0.96}, {1000, 0.98}, {2000, 0.99}, {4000, 1.0}};

  static const CostModel &defaults();

  /// Table lookups, linear between entries. Errors: UnknownCandidate for
  /// values outside the table.
  double f(double spatial_deg) const;
  double g(double temporal_h) const;
  double a_spatial(double spatial_deg) const;
  double a_temporal(double temporal_h) const;
  double a_particles(double count) const;

  /// Particles released per simulated hour per 1000 requested, relative to
  /// the 0.1° grid (finer grids need more particles to converge).
  double particle_multiplier(double spatial_deg) const;

  double area_hours(const gridstore::Domain &domain, const std::vector<gridstore::Extent> &extents) const;

  Estimate plume(const gridstore::Domain &domain, const std::vector<gridstore::Extent> &extents, double spatial_deg,
                 double temporal_h, double particles) const;
  Estimate fire(const gridstore::Domain &domain, const std::vector<gridstore::Extent> &extents, double spatial_deg,
                double temporal_h) const;
};

}  // namespace genie::simkit
