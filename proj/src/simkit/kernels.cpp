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

#include "genie/simkit/kernels.h"

#include <cmath>

namespace genie::simkit {

namespace {

inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline void move_one(Particle &p, double t_end, const WindField &wind, double diffusivity, std::uint64_t seed,
                     std::uint64_t step) {
  double dt = t_end - p.t;
  if (dt <= 0.0) return;
  auto [u, v] = wind.at(p.t);
  double u1 = uniform01(seed, p.id, step, 0);
  double u2 = uniform01(seed, p.id, step, 1);
  double r = std::sqrt(-2.0 * std::log(u1)) * std::sqrt(2.0 * diffusivity * dt);
  double a = 2.0 * M_PI * u2;
  p.x += u * dt + r * std::cos(a);
  p.y += v * dt + r * std::sin(a);
  p.t = t_end;
}

}  // namespace

std::uint64_t hash64(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(mix(mix(seed) ^ a) ^ b) ^ c);
}

double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return (static_cast<double>(hash64(seed, a, b, c) >> 11) + 0.5) * 0x1.0p-53;
}

void advance_particles_serial(std::vector<Particle> &particles, double t_end, const WindField &wind,
                              double diffusivity, std::uint64_t seed, std::uint64_t step) {
  for (auto &p : particles) move_one(p, t_end, wind, diffusivity, seed, step);
}

void advance_particles(std::vector<Particle> &particles, double t_end, const WindField &wind, double diffusivity,
                       std::uint64_t seed, std::uint64_t step) {
  const auto n = static_cast<std::ptrdiff_t>(particles.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) move_one(particles[k], t_end, wind, diffusivity, seed, step);
}

}  // namespace genie::simkit
