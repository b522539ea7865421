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


#include <chrono>
#include <thread>

#include <doctest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "genie/engine/engine.h"
#include "genie/engine/service.h"

using namespace genie;
using namespace genie::engine;
using nlohmann::json;

namespace {

const char *kQuery =
    "SELECT d.timestamp, AVG(d.concentration) AS c FROM smoke_dispersion d "
    "WHERE ST_Intersects(d.grid_cell, ST_MakeEnvelope(-119.6, 36.9, -119.2, 37.2, 4326)) "
    "AND d.timestamp BETWEEN '2024-08-15 06:00' AND '2024-08-15 11:59' GROUP BY d.timestamp";

json poll_done(httplib::Client &cli, const std::string &id) {
  for (int k = 0; k < 600; ++k) {
    auto r = cli.Get("/v1/query/" + id + "/epochs");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    auto j = json::parse(r->body);
    if (j["status"] == "done" || j["status"] == "error") return j;
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  FAIL("query did not finish");
  return {};
}

}  // namespace

TEST_CASE("http api") {
  auto cfg = EngineConfig::demo();
  Engine eng(cfg);
  Service svc(eng, 1);
  int port = svc.bind("127.0.0.1", 0);
  svc.start();
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(60);

  SUBCASE("syntax errors are rejected up front") {
    auto r = cli.Post("/v1/query", json{{"text", "SELECT FROM WHERE"}}.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    auto j = json::parse(r->body);
    CHECK(j["error"]["code"] == "SyntaxError");
    CHECK(j["error"].contains("line"));
    CHECK(j["error"].contains("column"));
    CHECK(r->has_header("X-Genie-Version"));
    CHECK(r->has_header("X-Genie-Elapsed-Ms"));
  }

  SUBCASE("unknown queries and early refines") {
    auto r = cli.Get("/v1/query/q999/epochs");
    REQUIRE(r);
    CHECK(r->status == 404);
    auto f = cli.Get("/v1/field?attribute=smoke_dispersion.concentration");
    REQUIRE(f);
    CHECK(f->status == 404);
  }

  SUBCASE("query, poll, refine, coverage and field") {
    auto r = cli.Post("/v1/query", json{{"text", kQuery}}.dump(), "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 202);
    auto id = json::parse(r->body)["query_id"].get<std::string>();
    auto done = poll_done(cli, id);
    REQUIRE(done["status"] == "done");
    REQUIRE(!done["epochs"].empty());
    CHECK(done["epochs"][0]["epoch"] == 1);
    std::size_t next = done["next"];
    auto tail = json::parse(cli.Get("/v1/query/" + id + "/epochs?after=" + std::to_string(next))->body);
    CHECK(tail["epochs"].empty());

    auto cov = cli.Get("/v1/coverage?attribute=smoke_dispersion.concentration");
    REQUIRE(cov);
    CHECK(cov->status == 200);
    CHECK(cov->body == eng.coverage().geojson(gridstore::Attribute{"smoke_dispersion", "concentration"}).dump());
    CHECK(cov->has_header("X-Genie-Elapsed-Ms"));

    auto field = cli.Get("/v1/field?attribute=smoke_dispersion.concentration&bbox=-119.6,36.9,-119.2,37.2");
    REQUIRE(field);
    CHECK(field->status == 200);
    CHECK(json::parse(field->body)["type"] == "FeatureCollection");

    auto cat = cli.Get("/v1/catalog");
    REQUIRE(cat);
    CHECK(json::parse(cat->body) == eng.catalog().to_json());

    json body = {{"bbox", {-119.5, 36.95, -119.4, 37.05}}, {"hints", {{"spatial_res", 0.02}}}};
    auto ref = cli.Post("/v1/query/" + id + "/refine", body.dump(), "application/json");
    REQUIRE(ref);
    CHECK(ref->status == 202);
    auto after = poll_done(cli, id);
    CHECK(after["status"] == "done");
    CHECK(after["next"].get<std::size_t>() > next);
  }

  svc.stop();
}
