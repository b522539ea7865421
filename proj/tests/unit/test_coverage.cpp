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


#include <random>

#include <doctest.h>

#include "genie/coverage/coverage.h"
#include "genie/coverage/query_log.h"

using namespace genie;
using namespace genie::coverage;

namespace {

const gridstore::Domain kDomain({36.0, 37.0, -120.0, -119.0}, {0, 86400});
const gridstore::Attribute kAttr{"t", "c"};

CoverageEntry entry(gridstore::QRect r, std::int64_t t0, std::int64_t t1, int sres, std::int64_t tres) {
  CoverageEntry e;
  e.attribute = kAttr;
  e.extent = {r, t0, t1};
  e.sres = sres;
  e.tres = tres;
  return e;
}

GridRequest request(gridstore::QRect r, std::int64_t t0, std::int64_t t1, int sres, std::int64_t tres) {
  GridRequest g;
  g.attribute = kAttr;
  g.rects = {r};
  g.t0 = t0;
  g.t1 = t1;
  g.sres = sres;
  g.tres = tres;
  return g;
}

}  // namespace

TEST_CASE("satisfaction needs nesting grids") {
  auto e = entry({0, 10, 0, 10}, 0, 3600, 2, 900);
  CHECK(satisfies(e, 2, 900));
  CHECK(satisfies(e, 10, 3600));
  CHECK(!satisfies(e, 5, 3600));
  CHECK(!satisfies(e, 1, 900));
  CHECK(!satisfies(e, 2, 600));
}

TEST_CASE("gaps shrink as entries are recorded") {
  CoverageMap map(kDomain);
  auto req = request({0, 20, 0, 20}, 0, 7200, 10, 3600);
  CHECK(map.find_gaps(req).cell_count() == 8);
  map.record(entry({0, 10, 0, 20}, 0, 7200, 10, 3600));
  auto gaps = map.find_gaps(req);
  CHECK(gaps.cell_count() == 4);
  for (const auto &g : gaps.gaps) CHECK(g.rect.i0 >= 10);
  auto report = map.classify_reuse(req);
  CHECK(report.covered_fraction == doctest::Approx(0.5));
  map.record(entry({10, 20, 0, 20}, 0, 3600, 5, 1800));
  CHECK(map.find_gaps(req).cell_count() == 2);
  CHECK(map.find_gaps(req).cell_count() == map.find_gaps_serial(req).cell_count());
  CHECK(map.invalidate(kAttr, {0, 5, 0, 5}) == 1);
  CHECK(map.find_gaps(req).cell_count() == 6);
}

TEST_CASE("parallel and serial gap kernels agree") {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 50; ++round) {
    CoverageMap map(kDomain);
    std::uniform_int_distribution<int> pos(0, 80), len(1, 30), hrs(0, 20);
    for (int k = 0; k < 8; ++k) {
      int i0 = pos(rng), j0 = pos(rng);
      std::int64_t t0 = hrs(rng) * 3600;
      map.record(entry({i0, i0 + len(rng), j0, j0 + len(rng)}, t0, t0 + 3 * 3600, 1, 900));
    }
    auto req = request({0, 100, 0, 100}, 0, 86400, 5, 3600);
    auto a = map.find_gaps(req);
    auto b = map.find_gaps_serial(req);
    CHECK(a.cell_count() == b.cell_count());
  }
}

TEST_CASE("geojson lists one feature per entry") {
  CoverageMap map(kDomain);
  map.record(entry({0, 10, 0, 10}, 0, 3600, 10, 3600));
  map.record(entry({10, 20, 0, 10}, 0, 3600, 10, 3600));
  auto j = map.geojson(kAttr);
  CHECK(j["type"] == "FeatureCollection");
  CHECK(j["features"].size() == 2);
  CHECK(map.geojson(gridstore::Attribute{"x", "y"})["features"].empty());
}
