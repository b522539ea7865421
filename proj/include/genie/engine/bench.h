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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genie/engine/config.h"

namespace genie::engine {

struct BenchQuery {
  std::string label;
  std::size_t invocations = 0;  // of the counted simulator
  std::size_t all_invocations = 0;
  double sim_seconds = 0.0;
  std::size_t bytes = 0;
  double wall_s = 0.0;
  double covered_fraction = 0.0;  // epoch 1
};

struct BenchRun {
  std::string label;
  std::vector<BenchQuery> queries;
  std::size_t invocations = 0;
  std::size_t all_invocations = 0;
  double sim_seconds = 0.0;
  std::size_t bytes = 0;
  double wall_s = 0.0;
  bool log_consistent = false;  // query-log totals agree with the sums above
};

struct BenchReport {
  std::string simulator;
  BenchRun reuse;
  BenchRun no_reuse;
  double invocation_reduction = 0.0;
  double runtime_reduction = 0.0;
  double bytes_reduction = 0.0;
  double wall_s = 0.0;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Runs every SELECT of `workload` twice on fresh in-memory engines: once
/// sharing materialized results, once starting each query from an empty
/// store. Invocation counts are for `simulator`.
BenchReport bench_reuse(const EngineConfig &config, const std::string &workload,
                        const std::string &simulator = "hysplit");

}  // namespace genie::engine
