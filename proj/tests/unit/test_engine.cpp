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


#include <doctest.h>

#include "genie/engine/engine.h"
#include "genie/error.h"
#include "genie/planner/requirements.h"
#include "genie/qlang/bind.h"
#include "genie/qlang/parser.h"

using namespace genie;
using namespace genie::engine;

namespace {

const char *kRegional =
    "SELECT d.timestamp, AVG(d.concentration) AS c FROM smoke_dispersion d "
    "WHERE ST_Intersects(d.grid_cell, ST_MakeEnvelope(-119.6, 36.9, -119.2, 37.2, 4326)) "
    "AND d.timestamp BETWEEN '2024-08-15 06:00' AND '2024-08-15 11:59' GROUP BY d.timestamp";

planner::AccuracyClass class_of(Engine &eng, const std::string &text) {
  auto q = std::get<qlang::SelectStmt>(qlang::parse_statement(text).payload).query;
  auto bound = qlang::bind(q, eng.catalog(), &eng.store());
  return planner::extract_requirements(bound, eng.catalog(), eng.store(), eng.config().floors).accuracy_class;
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = EngineConfig::parse("domain = 36, 37, -120, -119\ninterval = 2024-08-15T00:00Z, 2024-08-16T00:00Z\n"
                               "mode = adaptive\nworkers = 3\n");
  CHECK(c.domain == gridstore::BBox{36, 37, -120, -119});
  CHECK(c.workers == 3);
  CHECK(c.mode == planner::PlanMode::Adaptive);
  CHECK_THROWS_AS(EngineConfig::parse("domain = 1, 2\n"), Error);
  CHECK_THROWS_AS(EngineConfig::parse("nonsense line\n"), Error);
}

TEST_CASE("queries are classified by extent and buffers") {
  auto cfg = EngineConfig::demo();
  Engine eng(cfg);
  CHECK(class_of(eng, "SELECT AVG(d.concentration) FROM smoke_dispersion d") == planner::AccuracyClass::Overview);
  CHECK(class_of(eng, kRegional) == planner::AccuracyClass::Regional);
  CHECK(class_of(eng, "SELECT s.station_id, AVG(d.concentration) FROM monitoring_stations s JOIN smoke_dispersion d "
                      "ON ST_DWithin(s.location, d.grid_cell, 2000) WHERE s.station_id IN (4, 10) "
                      "GROUP BY s.station_id") == planner::AccuracyClass::Point);
}

TEST_CASE("a repeated query reuses materialized data") {
  auto cfg = EngineConfig::demo();
  cfg.mode = planner::PlanMode::Adaptive;
  Engine eng(cfg);
  Session session;
  auto first = eng.execute(kRegional, session);
  REQUIRE(first.epochs.size() == 1);
  CHECK(first.epochs[0].invocations > 0);
  CHECK(first.epochs[0].rows.rows.size() == 6);
  auto again = eng.execute(kRegional, session);
  REQUIRE(again.epochs.size() == 1);
  CHECK(again.epochs[0].invocations == 0);
  CHECK(again.epochs[0].covered_fraction == doctest::Approx(1.0));
  CHECK(again.epochs[0].rows.to_json() == first.epochs[0].rows.to_json());
  CHECK(!eng.coverage().entries().empty());
}

TEST_CASE("refine needs a prior query") {
  auto cfg = EngineConfig::demo();
  Engine eng(cfg);
  Session session;
  try {
    eng.refine(session, {36.9, 37.0, -119.5, -119.4}, "");
    FAIL("expected NoPriorQuery");
  } catch (const Error &e) {
    CHECK(e.code() == "NoPriorQuery");
  }
}

TEST_CASE("statement errors report the failing statement") {
  auto cfg = EngineConfig::demo();
  Engine eng(cfg);
  Session session;
  CHECK_THROWS_AS(eng.execute("SELECT x FROM no_such_table", session), Error);
  CHECK_THROWS_AS(eng.execute("SELECT FROM", session), Error);
  auto text = eng.explain(kRegional);
  CHECK(text.find("hysplit") != std::string::npos);
}
