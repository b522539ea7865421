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
#include "genie/simkit/kernels.h"
#include "genie/simkit/scenario.h"

namespace genie::simkit {

enum class Sampling { Trapezoid, End };
enum class Release { StepStart, Uniform };

struct PlumeConfig {
  double diffusivity = 500.0;  // m²/s
  double mixing_height_m = 1000.0;
  double spinup_h = 24.0;
  Sampling sampling = Sampling::End;
  Release release = Release::StepStart;  // when in the step particles leave the source
};

/// Mass balance at a step boundary, in micrograms.
struct MassLedger {
  std::int64_t t = 0;
  double released = 0.0;
  double in_cells = 0.0;
  double exited = 0.0;

  double imbalance() const { return released - in_cells - exited; }
};

/// Instantaneous release used for analytic checks.
struct PointRelease {
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t t = 0;
  double mass_ug = 0.0;
  std::size_t particles = 0;
};

struct PlumeSource {
  /// Emission rate in g/s/km² (may be null). Its extent must cover the
  /// simulated window from the spin-up start.
  const gridstore::GridField *emissions = nullptr;
  std::vector<PointRelease> points;
};

struct PlumeOutput {
  std::vector<gridstore::GridField> fields;  // µg/m³, one per extent
  std::vector<MassLedger> ledger;
  std::uint64_t released = 0;
  std::uint64_t particle_steps = 0;
  std::int64_t start = 0;  // first simulated second (after spin-up)
};

/// Forward particle run covering every extent. Emissions release
/// `particles_per_hour` particles per simulated hour, placed by mass over
/// the source cells; concentrations are mass per cell volume (cell area
/// times the mixing height), sampled at step boundaries.
PlumeOutput plume_simulate(const gridstore::Domain &domain, const gridstore::Attribute &attr,
                           const std::vector<gridstore::Extent> &extents, int sres, std::int64_t tres,
                           double particles_per_hour, const PlumeSource &source, const WindField &wind,
                           const PlumeConfig &config, std::uint64_t seed, bool parallel = true);

/// First second the run needs emissions for.
std::int64_t plume_spinup_start(const std::vector<gridstore::Extent> &extents, std::int64_t tres,
                                const PlumeConfig &config);

}  // namespace genie::simkit
