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

#include "genie/simkit/scenario.h"

namespace genie::simkit {

struct Particle {
  double x = 0.0;  // metres east of the domain's west edge
  double y = 0.0;  // metres north of the domain's south edge
  double t = 0.0;  // relative seconds of the current position
  double mass = 0.0;
  std::uint64_t id = 0;
};

/// Counter-based generator: the same (seed, a, b, c) always gives the same
/// value, independent of thread scheduling.
std::uint64_t hash64(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);
double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);  // in (0, 1)

/// Moves every particle from its own time to `t_end` in one forward-Euler
/// step (the wind at the particle's time, held over the step) plus an
/// isotropic Gaussian displacement of variance 2 K dt per axis.
void advance_particles(std::vector<Particle> &particles, double t_end, const WindField &wind,
                                double diffusivity, std::uint64_t seed, std::uint64_t step);
void advance_particles_serial(std::vector<Particle> &particles, double t_end, const WindField &wind,
                                       double diffusivity, std::uint64_t seed, std::uint64_t step);

}  // namespace genie::simkit
