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


#include <cmath>

#include <doctest.h>

#include "genie/simkit/accuracy.h"
#include "genie/simkit/cost_model.h"
#include "genie/simkit/fire.h"
#include "genie/simkit/kernels.h"
#include "genie/simkit/plume.h"
#include "genie/simkit/scenario.h"

using namespace genie;
using namespace genie::simkit;

namespace {

const gridstore::Domain kDomain({36.6, 37.6, -120.0, -119.0}, {1723680000, 1723680000 + 12 * 3600});

}  // namespace

TEST_CASE("particle kernels agree with the serial reference") {
  auto wind = WindField::series({{2.0, 1.0}, {-1.0, 3.0}, {0.5, -0.5}}, 900);
  std::vector<Particle> a(5000);
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k].x = 100.0 * static_cast<double>(k % 100);
    a[k].y = 50.0 * static_cast<double>(k / 100);
    a[k].t = 0.0;
    a[k].id = k;
  }
  auto b = a;
  advance_particles(a, 1800.0, wind, 500.0, 7, 3);
  advance_particles_serial(b, 1800.0, wind, 500.0, 7, 3);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].x == b[k].x);
    CHECK(a[k].y == b[k].y);
    CHECK(a[k].t == 1800.0);
  }
}

TEST_CASE("plume runs conserve mass") {
  PlumeSource src;
  src.points.push_back({37.1, -119.5, 0, 1e9, 2000});
  PlumeConfig config;
  config.spinup_h = 0.0;
  auto out = plume_simulate(kDomain, {"s", "c"}, {kDomain.full_extent()}, 5, 1800, 0.0, src,
                            WindField::uniform(3.0, 0.0), config, 1);
  REQUIRE(!out.ledger.empty());
  for (const auto &l : out.ledger) CHECK(std::abs(l.imbalance()) < 1e-9 * 1e9);
  CHECK(out.ledger.back().exited > 0.0);
  CHECK(out.fields.at(0).nt() == 24);
}

TEST_CASE("fire kernels agree with the serial reference") {
  std::vector<Ignition> ig = {{1, 37.1, -119.5, 0, 10.0, 0.8}};
  auto wind = WindField::uniform(2.0, 1.0);
  auto a = fire_simulate(kDomain, {"f", "e"}, {kDomain.full_extent()}, 2, 3600, ig, wind, FireConfig{}, true);
  auto b = fire_simulate(kDomain, {"f", "e"}, {kDomain.full_extent()}, 2, 3600, ig, wind, FireConfig{}, false);
  REQUIRE(a.at(0).values.size() == b.at(0).values.size());
  double total = 0.0;
  for (std::size_t k = 0; k < a[0].values.size(); ++k) {
    CHECK(a[0].values[k] == b[0].values[k]);
    total += a[0].values[k];
  }
  CHECK(total > 0.0);
}

TEST_CASE("cost model trade-off shape") {
  const auto &cm = CostModel::defaults();
  double temporal = cm.g(0.25) / cm.g(6.0);
  CHECK(temporal >= 10.0);
  CHECK(temporal <= 15.0);
  double spatial = cm.f(0.01) / cm.f(0.1);
  CHECK(spatial >= 8.0);
  CHECK(spatial <= 12.0);
  for (double dt : {1.0, 1.5, 2.0}) {
    CHECK(cm.a_temporal(dt) >= 0.85);
    CHECK(cm.a_temporal(dt) <= 0.90);
  }
  auto e1 = cm.plume(kDomain, {kDomain.full_extent()}, 0.1, 1.0, 1000);
  auto e2 = cm.plume(kDomain, {kDomain.full_extent()}, 0.05, 1.0, 1000);
  CHECK(e2.seconds > e1.seconds);
  CHECK(e2.accuracy > e1.accuracy);
}

TEST_CASE("accuracy score of a field against itself") {
  auto f = gridstore::GridField::make({"s", "c"}, 1, 900, {{0, 10, 0, 10}, 0, 3600});
  for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = static_cast<double>(k % 7);
  CHECK(accuracy_score(f, f) == doctest::Approx(1.0));
  auto coarse = gridstore::aggregate(f, 5, 3600);
  CHECK(accuracy_score(coarse, f) == doctest::Approx(1.0));
  auto off = coarse;
  for (auto &v : off.values) v += 1.0;
  CHECK(accuracy_score(off, f) < 1.0);
}
