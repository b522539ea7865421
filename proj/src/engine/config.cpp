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

#include "genie/engine/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::engine {

namespace {

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string &msg) {
  throw Error("ConfigError", fmt::format("line {}: {}", line, msg));
}

double number(int line, const std::string &key, const std::string &text) {
  double v = 0.0;
  auto t = trim(text);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) fail(line, fmt::format("{}: '{}' is not a number", key, t));
  return v;
}

std::vector<std::string> list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> numbers(int line, const std::string &key, const std::string &text, std::size_t n) {
  auto items = list(text);
  if (items.size() != n) fail(line, fmt::format("{} takes {} comma-separated values", key, n));
  std::vector<double> out;
  for (const auto &i : items) out.push_back(number(line, key, i));
  return out;
}

bool boolean(int line, const std::string &key, const std::string &text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  fail(line, fmt::format("{}: '{}' is not a boolean", key, text));
}

}  // namespace

EngineConfig EngineConfig::parse(const std::string &text, const std::filesystem::path &base) {
  EngineConfig c;
  c.data_dir = base;
  std::stringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    raw = trim(raw);
    if (raw.empty()) continue;
    auto eq = raw.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    std::string key = trim(raw.substr(0, eq)), value = trim(raw.substr(eq + 1));
    auto num = [&] { return number(line, key, value); };

    if (key == "domain") {
      auto v = numbers(line, key, value, 4);
      c.domain = gridstore::BBox{v[0], v[1], v[2], v[3]};
    } else if (key == "interval") {
      auto v = list(value);
      if (v.size() != 2) fail(line, "interval takes start, end");
      try {
        c.interval = gridstore::TimeInterval{gridstore::parse_timestamp(v[0]), gridstore::parse_timestamp(v[1])};
      } catch (const Error &e) {
        fail(line, e.what());
      }
    } else if (key.rfind("ladder.", 0) == 0) {
      auto v = numbers(line, key, value, 2);
      auto which = key.substr(7);
      if (which == "coarse") c.ladder.coarse_s = v[0], c.ladder.coarse_t = v[1];
      else if (which == "medium") c.ladder.medium_s = v[0], c.ladder.medium_t = v[1];
      else if (which == "fine") c.ladder.fine_s = v[0], c.ladder.fine_t = v[1];
      else if (which == "high") c.ladder.high_s = v[0], c.ladder.high_t = v[1];
      else fail(line, "unknown ladder rung " + which);
    } else if (key == "workers") {
      c.workers = static_cast<int>(num());
    } else if (key == "warm_start_budget_s") {
      c.warm_start_budget_s = num();
    } else if (key == "floor.overview") {
      c.floors.overview = num();
    } else if (key == "floor.regional") {
      c.floors.regional = num();
    } else if (key == "floor.point") {
      c.floors.point = num();
    } else if (key.rfind("threshold.", 0) == 0) {
      c.thresholds[key.substr(10)] = num();
    } else if (key == "data_dir") {
      c.data_dir = base / value;
    } else if (key == "port") {
      c.port = static_cast<int>(num());
    } else if (key == "mode") {
      try {
        c.mode = planner::parse_mode(value);
      } catch (const Error &e) {
        fail(line, e.what());
      }
    } else if (key == "schema") {
      c.schema = value;
    } else if (key == "wind") {
      c.wind = value;
    } else if (key.rfind("load.", 0) == 0) {
      c.loads[key.substr(5)] = value;
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(num());
    } else if (key == "state_dir") {
      c.state_dir = value;
    } else if (key == "log") {
      c.log = value;
    } else if (key == "strict_signature") {
      c.strict_signature = boolean(line, key, value);
    } else if (key == "parallel") {
      c.parallel = boolean(line, key, value);
    } else if (key == "fire.beta") {
      c.fire.beta = num();
    } else if (key == "fire.spread_kmh") {
      c.fire.spread_kmh = num();
    } else if (key == "fire.elongation") {
      c.fire.elongation = num();
    } else if (key == "plume.diffusivity") {
      c.plume.diffusivity = num();
    } else if (key == "plume.mixing_height_m") {
      c.plume.mixing_height_m = num();
    } else if (key == "plume.spinup_h") {
      c.plume.spinup_h = num();
    } else if (key == "cost.plume_c") {
      c.cost.plume_c = num();
    } else if (key == "cost.fire_c") {
      c.cost.fire_c = num();
    } else if (key == "cost.step_weight") {
      c.cost.step_weight = num();
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

EngineConfig EngineConfig::load(const std::filesystem::path &file) {
  std::ifstream in(file);
  if (!in) throw Error("ConfigError", fmt::format("cannot read {}", file.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), file.parent_path().empty() ? std::filesystem::path(".") : file.parent_path());
}

EngineConfig EngineConfig::demo() { return load(std::filesystem::path(GENIE_DATA_DIR) / "demo" / "genie.conf"); }

void EngineConfig::validate() const {
  auto bad = [](const std::string &m) { throw Error("ConfigError", m); };
  if (!domain.valid() || domain.area() <= 0.0) bad("domain is empty");
  if (!interval.valid() || interval.duration() <= 0) bad("interval is empty");
  const auto &l = ladder;
  if (!(l.coarse_s > l.medium_s && l.medium_s > l.fine_s && l.fine_s > l.high_s && l.high_s > 0.0)) {
    bad("ladder spatial resolutions must strictly decrease");
  }
  if (!(l.coarse_t >= l.medium_t && l.medium_t >= l.fine_t && l.fine_t >= l.high_t && l.high_t > 0.0)) {
    bad("ladder temporal resolutions must not increase");
  }
  if (warm_start_budget_s < 0.0) bad("warm_start_budget_s must be >= 0");
  if (workers < 1) bad("workers must be >= 1");
  if (port < 0 || port > 65535) bad("port out of range");
}

std::filesystem::path EngineConfig::resolve(const std::filesystem::path &p) const {
  return p.is_absolute() ? p : data_dir / p;
}

std::optional<double> EngineConfig::threshold(const gridstore::Attribute &attr) const {
  auto it = thresholds.find(attr.str());
  if (it == thresholds.end()) return std::nullopt;
  return it->second;
}

}  // namespace genie::engine
