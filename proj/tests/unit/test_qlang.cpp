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


#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "genie/qlang/parser.h"
#include "genie/qlang/render.h"

using namespace genie::qlang;

namespace {

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("corpus listings parse and round-trip") {
  int files = 0;
  for (const auto &e : std::filesystem::directory_iterator(std::filesystem::path(GENIE_DATA_DIR) / "corpus")) {
    CAPTURE(e.path().string());
    auto script = parse(slurp(e.path()));
    CHECK(!script.statements.empty());
    auto again = parse(render(script));
    CHECK(equal(script, again));
    CHECK(render(again) == render(script));
    ++files;
  }
  CHECK(files == 9);
}

TEST_CASE("keywords are case-insensitive") {
  auto a = parse_statement("select avg(d.concentration) from smoke_dispersion d where d.x > 1");
  auto b = parse_statement("SELECT AVG(d.concentration) FROM smoke_dispersion d WHERE d.x > 1;");
  CHECK(equal(a, b));
}

TEST_CASE("syntax errors carry position and expectations") {
  try {
    parse("SELECT a\nFROM t WHERE;");
    FAIL("expected a syntax error");
  } catch (const SyntaxError &e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 13);
    CHECK(e.code() == "SyntaxError");
    CHECK(!e.expected().empty());
  }
  CHECK_THROWS_AS(parse("SELECT 'open"), SyntaxError);
  CHECK_THROWS_AS(parse("SELECT a FROM t /* never closed"), SyntaxError);
  CHECK_THROWS_AS(parse("SELECT # FROM t"), SyntaxError);
}

TEST_CASE("hint values normalize to degrees and hours") {
  auto h = parse_hint("WITH HINT (spatial_res = '2km', temporal_res = '30min', hysplit.particle_count = 4000)");
  REQUIRE(h.entries.size() == 3);
  REQUIRE(h.entries[0].value.normalized);
  CHECK(*h.entries[0].value.normalized == doctest::Approx(2.0 / kKmPerDegree));
  REQUIRE(h.entries[1].value.normalized);
  CHECK(*h.entries[1].value.normalized == doctest::Approx(0.5));
  CHECK(h.entries[2].key == "hysplit.particle_count");
  CHECK(h.entries[2].value.number == 4000);

  HintValue v;
  v.kind = HintValueKind::String;
  v.text = "1 hr";
  CHECK(*normalize_hint_value("temporal_res", v) == doctest::Approx(1.0));
  v.text = "0.05deg";
  CHECK(*normalize_hint_value("spatial_res", v) == doctest::Approx(0.05));
}

TEST_CASE("expressions render canonically") {
  auto e = parse_expression("a + b * (c - 1)");
  CHECK(render(*e) == "a + b * (c - 1)");
  auto f = parse_expression("(a + b) * c");
  CHECK(render(*f) == "(a + b) * c");
  auto g = parse_expression("x not between 1 and 2");
  CHECK(render(*g) == "x NOT BETWEEN 1 AND 2");
}
