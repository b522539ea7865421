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
#include <set>

#include <doctest.h>

#include "genie/error.h"
#include "genie/gridstore/geometry.h"
#include "genie/planner/epochs.h"
#include "genie/planner/optimizer.h"

using namespace genie;
using namespace genie::planner;

TEST_CASE("class heuristics") {
  CHECK(class_resolution(AccuracyClass::Overview) == std::pair{0.2, 3.0});
  CHECK(class_resolution(AccuracyClass::Regional) == std::pair{0.05, 1.0});
  CHECK(class_resolution(AccuracyClass::Point) == std::pair{0.02, 0.5});
}

TEST_CASE("argmin picks the cheapest feasible candidate") {
  std::vector<Candidate> c = {
      {{{"spatial_res", 0.1}}, 10.0, 0.80},
      {{{"spatial_res", 0.05}}, 20.0, 0.92},
      {{{"spatial_res", 0.02}}, 20.0, 0.95},
      {{{"spatial_res", 0.01}}, 80.0, 0.99},
  };
  CHECK(argmin_feasible(c, 0.75) == 0);
  CHECK(argmin_feasible(c, 0.90) == 2);  // tie on cost goes to the higher accuracy
  CHECK(argmin_feasible(c, 0.99) == 3);
  CHECK_THROWS_AS(argmin_feasible(c, 0.995), Error);
}

TEST_CASE("progressive epochs refine monotonically") {
  RequirementSpec req;
  req.accuracy_class = AccuracyClass::Regional;
  auto plan = schedule_epochs(req, 50.0);
  REQUIRE(plan.epochs.size() == 3);
  CHECK(plan.epochs[0].region == EpochRegion::Full);
  CHECK(plan.epochs[1].region == EpochRegion::OverThreshold);
  CHECK(plan.epochs[2].region == EpochRegion::Explicit);
  CHECK_NOTHROW(check_monotone(plan));
  for (std::size_t k = 1; k < plan.epochs.size(); ++k) {
    CHECK(plan.epochs[k].spatial_res <= plan.epochs[k - 1].spatial_res);
    CHECK(plan.epochs[k].temporal_res <= plan.epochs[k - 1].temporal_res);
  }
  auto hinted = req;
  hinted.hints["spatial_res"] = 0.05;
  auto hp = schedule_epochs(hinted, 50.0);
  CHECK(hp.find(2) == nullptr);
}

TEST_CASE("refine region is the over-threshold cell set") {
  auto f = gridstore::GridField::make({"t", "c"}, 5, 3600, {{0, 30, 0, 30}, 0, 7200});
  std::fill(f.values.begin(), f.values.end(), 0.0);
  f.at(0, 1, 1) = 60.0;
  f.at(1, 1, 2) = 70.0;
  f.at(1, 4, 0) = 51.0;
  f.at(0, 5, 5) = 50.0;  // not above
  auto cells = over_threshold_cells(f, 50.0);
  CHECK(std::set(cells.begin(), cells.end()) == std::set<std::pair<int, int>>{{1, 1}, {1, 2}, {4, 0}});
  auto rects = refine_region(f, 50.0);
  long long area = 0;
  for (const auto &r : rects) area += r.area();
  CHECK(area == 3 * 25);
  for (const auto &r : rects) {
    CHECK(r.i0 % 5 == 0);
    CHECK(r.j0 % 5 == 0);
  }
}
