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
#include <random>

#include <doctest.h>

#include "genie/error.h"
#include "genie/gridstore/geometry.h"
#include "genie/gridstore/grid_field.h"
#include "genie/gridstore/store.h"

using namespace genie::gridstore;

namespace {

const Domain kDomain({36.0, 37.0, -120.0, -119.0}, {0, 86400});
const Attribute kAttr{"t", "c"};

GridField filled(int sres, std::int64_t tres, const Extent &e, double v) {
  auto f = GridField::make(kAttr, sres, tres, e);
  std::fill(f.values.begin(), f.values.end(), v);
  return f;
}

}  // namespace

TEST_CASE("buffer boxes follow the metric conversion") {
  auto boxes = buffer_extent({{0.0, 0.0}}, kMetersPerDegree);
  REQUIRE(boxes.size() == 1);
  CHECK(boxes[0].lat_min == doctest::Approx(-1.0));
  CHECK(boxes[0].lat_max == doctest::Approx(1.0));
  CHECK(boxes[0].lon_min == doctest::Approx(-1.0));
  CHECK(boxes[0].lon_max == doctest::Approx(1.0));
  auto merged = buffer_extent({{36.5, -119.5}, {36.5, -119.5001}}, 1000.0);
  double area = 0.0;
  for (const auto &b : merged) area += b.area();
  CHECK(area > 0.0);
}

TEST_CASE("alignment grows to the grid and clips") {
  QRect r = align_rect({3, 17, 5, 9}, 10, kDomain.full_rect());
  CHECK(r == QRect{0, 20, 0, 10});
  CHECK(resolution_quanta(0.05) == 5);
  CHECK(resolution_seconds(0.25) == 900);
  CHECK_THROWS_AS(resolution_quanta(0.015), genie::Error);
  auto [t0, t1] = align_span(100, 4000, 3600, 86400);
  CHECK(t0 == 0);
  CHECK(t1 == 7200);
}

TEST_CASE("aggregate matches its serial reference and block means") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  Extent e{{0, 30, 0, 47}, 0, 7 * 900};
  auto f = GridField::make(kAttr, 1, 900, e);
  for (auto &v : f.values) v = u(rng);
  auto a = aggregate(f, 10, 3600);
  auto b = aggregate_serial(f, 10, 3600);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(a.values[k] == doctest::Approx(b.values[k]));
  double sum = 0.0;
  for (int t = 0; t < 4; ++t)
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) sum += f.at(t, i, j);
  CHECK(a.at(0, 0, 0) == doctest::Approx(sum / 400.0));
  CHECK_THROWS_AS(aggregate(f, 3, 1000), genie::Error);
}

TEST_CASE("finer fields take priority and uncovered cells are NaN") {
  Store store(kDomain);
  Extent coarse{{0, 50, 0, 50}, 0, 7200};
  Extent fine{{10, 20, 10, 20}, 0, 3600};
  auto r1 = store.materialize(filled(10, 3600, coarse, 1.0));
  CHECK(r1.all_new());
  auto r2 = store.materialize(filled(1, 900, fine, 2.0));
  CHECK(r2.replaced_cells > 0);
  CHECK(*store.value_at(kAttr, 15, 15, 100) == 2.0);
  CHECK(*store.value_at(kAttr, 5, 5, 100) == 1.0);
  CHECK(*store.value_at(kAttr, 15, 15, 5000) == 1.0);
  CHECK(!store.value_at(kAttr, 80, 80, 100).has_value());

  // an older coarse field arriving later keeps the fine cells
  auto r3 = store.materialize(filled(10, 3600, coarse, 3.0));
  CHECK(r3.retained_cells > 0);
  CHECK(*store.value_at(kAttr, 15, 15, 100) == 2.0);
  CHECK(*store.value_at(kAttr, 5, 5, 100) == 3.0);

  auto p = store.paint(kAttr, {{0, 60, 0, 60}, 0, 3600}, 1, 900);
  CHECK(std::isnan(p.field.at(0, 55, 55)));
  CHECK(p.field.at(0, 0, 0) == 3.0);
  CHECK(p.field.at(0, 15, 15) == 2.0);
  CHECK(p.owner[p.field.index(0, 55, 55)] == 0);
}

TEST_CASE("timestamps round-trip") {
  auto t = parse_timestamp("2024-08-15 00:00");
  CHECK(t == 1723680000);
  CHECK(parse_timestamp(format_timestamp(t + 5400)) == t + 5400);
}
