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


#include <memory>

#include <doctest.h>

#include "genie/catalog/catalog.h"
#include "genie/error.h"
#include "genie/qlang/parser.h"
#include "genie/simkit/adapter.h"

using namespace genie;

namespace {

template <typename T>
T stmt(const std::string &text) {
  return std::get<T>(qlang::parse_statement(text).payload);
}

std::unique_ptr<catalog::Catalog> demo_catalog() {
  auto cp = std::make_unique<catalog::Catalog>(simkit::AdapterRegistry::builtin().resolver());
  auto &c = *cp;
  c.register_simulator(stmt<qlang::RegisterSimulatorStmt>(
      "REGISTER SIMULATOR wrf_sfire EXECUTABLE 'builtin:fire' PARAMETERS (spatial_res REAL DEFAULT 0.1, "
      "temporal_res REAL DEFAULT 1.0) OUTPUT_FORMAT netcdf"));
  c.register_simulator(stmt<qlang::RegisterSimulatorStmt>(
      "REGISTER SIMULATOR hysplit EXECUTABLE 'builtin:plume' PARAMETERS (spatial_res REAL DEFAULT 0.1, "
      "temporal_res REAL DEFAULT 1.0, particle_count INTEGER DEFAULT 1000) OUTPUT_FORMAT netcdf"));
  c.create_table(stmt<qlang::CreateTableStmt>(
      "CREATE TABLE fire_emissions (fire_id INTEGER PRIMARY KEY, location GEOMETRY, emission_rate REAL)"));
  c.create_table(stmt<qlang::CreateTableStmt>(
      "CREATE TABLE smoke_dispersion (grid_cell GEOMETRY, timestamp TIMESTAMP, concentration REAL)"));
  c.add_virtual_column(stmt<qlang::AlterAddVirtualStmt>(
      "ALTER TABLE fire_emissions ADD COLUMN emission_rate REAL GENERATED BY SIMULATOR wrf_sfire"));
  c.add_virtual_column(stmt<qlang::AlterAddVirtualStmt>(
      "ALTER TABLE smoke_dispersion ADD COLUMN concentration REAL GENERATED BY SIMULATOR hysplit "
      "DEPENDS ON (fire_emissions.emission_rate)"));
  return cp;
}

std::string code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("dependencies come out in topological order") {
  auto cp = demo_catalog();
  auto &c = *cp;
  auto order = c.topo_order({"smoke_dispersion", "concentration"});
  REQUIRE(order.size() == 2);
  CHECK(order[0].column.column == "emission_rate");
  CHECK(order[1].column.column == "concentration");
  CHECK(order[1].simulators.at(0).name == "hysplit");
  CHECK(c.is_virtual({"fire_emissions", "emission_rate"}));
  CHECK(!c.is_virtual({"fire_emissions", "location"}));
}

TEST_CASE("catalog rejects bad definitions") {
  auto cp = demo_catalog();
  auto &c = *cp;
  CHECK(code_of([&] {
          c.register_simulator(stmt<qlang::RegisterSimulatorStmt>(
              "REGISTER SIMULATOR hysplit EXECUTABLE 'builtin:fire' PARAMETERS (spatial_res REAL DEFAULT 0.5)"));
        }) == "DuplicateSimulator");
  CHECK(code_of([&] {
          c.add_virtual_column(stmt<qlang::AlterAddVirtualStmt>(
              "ALTER TABLE fire_emissions ADD COLUMN emission_rate REAL GENERATED BY SIMULATOR wrf_sfire "
              "DEPENDS ON (smoke_dispersion.concentration)"));
        }) == "CyclicDependency");
  CHECK(code_of([&] {
          c.add_virtual_column(stmt<qlang::AlterAddVirtualStmt>(
              "ALTER TABLE nowhere ADD COLUMN x REAL GENERATED BY SIMULATOR hysplit"));
        }) == "UnknownTable");
  CHECK(code_of([&] {
          c.add_virtual_column(stmt<qlang::AlterAddVirtualStmt>(
              "ALTER TABLE smoke_dispersion ADD COLUMN y REAL GENERATED BY SIMULATOR nobody"));
        }) == "UnknownSimulator");
}

TEST_CASE("catalog serialization round-trips") {
  auto cp = demo_catalog();
  auto &c = *cp;
  catalog::Catalog d(simkit::AdapterRegistry::builtin().resolver());
  d.deserialize(c.serialize());
  CHECK(d.to_json() == c.to_json());
  CHECK(d.topo_order({"smoke_dispersion", "concentration"}).size() == 2);
}
