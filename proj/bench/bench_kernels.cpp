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


// Serial reference kernels against their OpenMP versions.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "genie/coverage/coverage.h"
#include "genie/gridstore/grid_field.h"
#include "genie/simkit/fire.h"
#include "genie/simkit/kernels.h"
#include "genie/simkit/scenario.h"

using namespace genie;

namespace {

const gridstore::Domain &domain() {
  static const gridstore::Domain d({36.6, 37.95, -120.4, -118.15}, {1723680000, 1723939200});
  return d;
}

gridstore::GridField fine_field() {
  auto f = gridstore::GridField::make({"t", "c"}, 1, 900, {domain().full_rect(), 0, 6 * 3600});
  for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = std::sin(0.001 * static_cast<double>(k));
  return f;
}

void BM_Aggregate(benchmark::State &state) {
  const auto f = fine_field();
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto g = parallel ? gridstore::aggregate(f, 10, 3600) : gridstore::aggregate_serial(f, 10, 3600);
    benchmark::DoNotOptimize(g.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.values.size()));
}
BENCHMARK(BM_Aggregate)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_FindGaps(benchmark::State &state) {
  const auto &d = domain();
  std::vector<coverage::CoverageEntry> entries;
  for (int k = 0; k < 64; ++k) {
    coverage::CoverageEntry e;
    e.id = static_cast<std::uint64_t>(k + 1);
    e.attribute = {"t", "c"};
    int i0 = (k * 17) % 120, j0 = (k * 29) % 200;
    e.extent = {{i0, i0 + 20, j0, j0 + 30}, 0, d.duration()};
    e.sres = 1;
    e.tres = 900;
    entries.push_back(e);
  }
  std::vector<const coverage::CoverageEntry *> candidates;
  for (const auto &e : entries) candidates.push_back(&e);
  coverage::GridRequest req;
  req.attribute = {"t", "c"};
  req.rects = {d.full_rect()};
  req.t0 = 0;
  req.t1 = d.duration();
  req.sres = 2;
  req.tres = 3600;
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto gaps = coverage::find_gaps_kernel(d, req, candidates, parallel);
    benchmark::DoNotOptimize(gaps.gaps.data());
  }
}
BENCHMARK(BM_FindGaps)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_AdvanceParticles(benchmark::State &state) {
  const auto wind = simkit::WindField::uniform(2.0, 1.0);
  std::vector<simkit::Particle> seed(100000);
  for (std::size_t k = 0; k < seed.size(); ++k) {
    seed[k].x = 1000.0 * static_cast<double>(k % 200);
    seed[k].y = 1000.0 * static_cast<double>(k / 200 % 150);
    seed[k].mass = 1.0;
    seed[k].id = k;
  }
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    state.PauseTiming();
    auto particles = seed;
    state.ResumeTiming();
    if (parallel) {
      simkit::advance_particles(particles, 900.0, wind, 500.0, 1, 1);
    } else {
      simkit::advance_particles_serial(particles, 900.0, wind, 500.0, 1, 1);
    }
    benchmark::DoNotOptimize(particles.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(seed.size()));
}
BENCHMARK(BM_AdvanceParticles)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_FireSpread(benchmark::State &state) {
  const auto &d = domain();
  const auto wind = simkit::WindField::uniform(2.0, 1.0);
  std::vector<simkit::Ignition> ignitions = {{1, 37.19, -119.26, 0, 72.0, 0.6}, {2, 37.4, -119.0, 3600, 48.0, 0.8}};
  const gridstore::Extent extent{d.full_rect(), 0, 12 * 3600};
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto fields = simkit::fire_simulate(d, {"fire_emissions", "emission_rate"}, {extent}, 5, 3600, ignitions, wind,
                                        simkit::FireConfig{}, parallel);
    benchmark::DoNotOptimize(fields.front().values.data());
  }
}
BENCHMARK(BM_FireSpread)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
