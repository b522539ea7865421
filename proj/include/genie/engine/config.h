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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "genie/gridstore/geometry.h"
#include "genie/planner/epochs.h"
#include "genie/planner/requirements.h"
#include "genie/simkit/adapter.h"

namespace genie::engine {

/// Engine settings. The file format is one `key = value` per line, `#`
/// starts a comment. Relative paths resolve against `data_dir`, which
/// itself resolves against the directory of the config file.
///
///   domain = lat_min, lat_max, lon_min, lon_max
///   interval = 2024-08-15T00:00Z, 2024-08-18T00:00Z
///   ladder.coarse = 0.5, 6        (degrees, hours; also medium, fine, high)
///   workers = 1
///   warm_start_budget_s = 0
///   floor.overview = 0.85         (also regional, point)
///   threshold.smoke_dispersion.concentration = 50
///   data_dir = .
///   port = 8080
///   mode = progressive            (adaptive, optimize, static_high, static_low)
///   schema = schema.sql
///   wind = wind.csv
///   load.monitoring_stations = stations.csv
///   seed = 1
///   state_dir = state             (optional: persist catalog, store, coverage, log)
///   log = queries.jsonl           (optional, when no state_dir)
///   strict_signature = false
///   parallel = true
///   fire.beta, fire.spread_kmh, fire.elongation, plume.diffusivity,
///   plume.mixing_height_m, plume.spinup_h, cost.plume_c, cost.fire_c,
///   cost.step_weight
struct EngineConfig {
  gridstore::BBox domain{36.6, 37.95, -120.4, -118.15};
  gridstore::TimeInterval interval{1723680000, 1723939200};  // 2024-08-15 .. 2024-08-18
  planner::Ladder ladder;
  int workers = 1;
  double warm_start_budget_s = 0.0;
  planner::AccuracyFloors floors;
  std::map<std::string, double> thresholds;  // "table.column" -> alert level
  std::filesystem::path data_dir = ".";
  int port = 8080;
  planner::PlanMode mode = planner::PlanMode::Progressive;
  std::optional<std::filesystem::path> schema;
  std::optional<std::filesystem::path> wind;
  std::map<std::string, std::filesystem::path> loads;  // table -> data file
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> state_dir;
  std::optional<std::filesystem::path> log;
  bool strict_signature = false;
  bool parallel = true;
  simkit::FireConfig fire;
  simkit::PlumeConfig plume;
  simkit::CostModel cost;

  /// Errors: ConfigError (unknown key, bad value, failed invariant).
  static EngineConfig parse(const std::string &text, const std::filesystem::path &base = ".");
  static EngineConfig load(const std::filesystem::path &file);
  /// The bundled wildfire scenario.
  static EngineConfig demo();

  /// Throws ConfigError unless the ladder gets strictly finer in space,
  /// never coarser in time, and the budget is non-negative.
  void validate() const;
  std::filesystem::path resolve(const std::filesystem::path &p) const;
  std::optional<double> threshold(const gridstore::Attribute &attr) const;
};

}  // namespace genie::engine
