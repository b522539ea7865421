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
#include <vector>

#include "genie/gridstore/grid_field.h"
#include "genie/simkit/scenario.h"

namespace genie::simkit {

struct FireConfig {
  double spread_kmh = 0.5;  // front speed per unit intensity
  double elongation = 1.5;  // downwind stretch of the burning ellipse
  double beta = 40.0;       // emission rate (g/s/km²) per unit intensity
  std::int64_t substep_s = 900;
  double diurnal_amplitude = 0.0;  // emission multiplier 1 + a * sin, peaking at peak_hour_utc
  double peak_hour_utc = 22.0;
};

/// Diurnal emission multiplier at absolute unix time `t`.
double diurnal_factor(const FireConfig &config, std::int64_t t);

/// Emission rate fields for each extent. A cell's value is beta * intensity
/// times the fraction of its 0.01° sub-cells inside a burning front,
/// averaged over the sub-steps ending inside the output step and scaled by
/// the diurnal factor. Fronts are
/// ellipses centred on the ignition with semi-axes elongation * r (along the
/// wind) and r, r = spread_kmh * intensity * elapsed hours, while the fire is
/// within its duration.
std::vector<gridstore::GridField> fire_simulate(const gridstore::Domain &domain, const gridstore::Attribute &attr,
                                                const std::vector<gridstore::Extent> &extents, int sres,
                                                std::int64_t tres, const std::vector<Ignition> &ignitions,
                                                const WindField &wind, const FireConfig &config, bool parallel = true);

/// Whether the quantum cell centred at (lat, lon) burns at relative time t.
bool fire_burning(const Ignition &ig, double lat, double lon, std::int64_t t, const WindField &wind,
                  const FireConfig &config);

}  // namespace genie::simkit
