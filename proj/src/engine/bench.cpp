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

#include "genie/engine/bench.h"

#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "genie/engine/engine.h"
#include "genie/qlang/parser.h"
#include "genie/qlang/render.h"

namespace genie::engine {

namespace {

double reduction(double base, double with) { return base > 0.0 ? 1.0 - with / base : 0.0; }

BenchRun run(EngineConfig config, const std::vector<std::string> &queries, bool reuse, const std::string &sim) {
  config.state_dir.reset();
  config.log.reset();
  Engine engine(std::move(config));
  BenchRun out;
  out.label = reuse ? "reuse" : "no-reuse";
  Session session;
  RunOptions opts;
  opts.label = out.label;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < queries.size(); ++k) {
    if (!reuse) engine.reset_state();
    auto q0 = std::chrono::steady_clock::now();
    auto r = engine.execute(queries[k], session, {}, opts);
    BenchQuery bq;
    bq.label = fmt::format("Q{}", k + 1);
    for (const auto &e : r.epochs) {
      auto it = e.invocations_by_simulator.find(sim);
      if (it != e.invocations_by_simulator.end()) bq.invocations += it->second;
      bq.all_invocations += e.invocations;
      bq.sim_seconds += e.sim_seconds;
      bq.bytes += e.bytes;
    }
    if (!r.epochs.empty()) bq.covered_fraction = r.epochs.front().covered_fraction;
    bq.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - q0).count();
    out.invocations += bq.invocations;
    out.all_invocations += bq.all_invocations;
    out.sim_seconds += bq.sim_seconds;
    out.bytes += bq.bytes;
    out.queries.push_back(bq);
  }
  out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  auto t = coverage::totals(engine.log().records(), out.label);
  out.log_consistent = t.queries == queries.size() && t.invocations == out.all_invocations &&
                       t.bytes == out.bytes && std::abs(t.sim_seconds - out.sim_seconds) <= 1e-6 * (1.0 + out.sim_seconds);
  return out;
}

nlohmann::json run_json(const BenchRun &r) {
  nlohmann::json qs = nlohmann::json::array();
  for (const auto &q : r.queries) {
    qs.push_back({{"label", q.label},
                  {"invocations", q.invocations},
                  {"all_invocations", q.all_invocations},
                  {"sim_seconds", q.sim_seconds},
                  {"bytes", q.bytes},
                  {"wall_s", q.wall_s},
                  {"covered_fraction", q.covered_fraction}});
  }
  return {{"invocations", r.invocations}, {"all_invocations", r.all_invocations}, {"sim_seconds", r.sim_seconds},
          {"bytes", r.bytes},             {"wall_s", r.wall_s},                   {"log_consistent", r.log_consistent},
          {"queries", qs}};
}

}  // namespace

nlohmann::json BenchReport::to_json() const {
  return {{"simulator", simulator},
          {"reuse", run_json(reuse)},
          {"no_reuse", run_json(no_reuse)},
          {"invocation_reduction", invocation_reduction},
          {"runtime_reduction", runtime_reduction},
          {"bytes_reduction", bytes_reduction},
          {"wall_s", wall_s}};
}

std::string BenchReport::to_text() const {
  std::string out = fmt::format("{:<6} {:>14} {:>14} {:>16} {:>16} {:>8}\n", "query",
                                simulator + " w/o", simulator + " w/", "model s w/o", "model s w/", "covered");
  for (std::size_t k = 0; k < reuse.queries.size() && k < no_reuse.queries.size(); ++k) {
    const auto &a = no_reuse.queries[k];
    const auto &b = reuse.queries[k];
    out += fmt::format("{:<6} {:>14} {:>14} {:>16.1f} {:>16.1f} {:>7.0f}%\n", b.label, a.invocations, b.invocations,
                       a.sim_seconds, b.sim_seconds, 100.0 * b.covered_fraction);
  }
  out += fmt::format("{:<6} {:>14} {:>14} {:>16.1f} {:>16.1f}\n", "total", no_reuse.invocations, reuse.invocations,
                     no_reuse.sim_seconds, reuse.sim_seconds);
  out += fmt::format("invocations -{:.1f}%  model runtime -{:.1f}%  bytes -{:.1f}% ({} -> {})  wall {:.1f} s\n",
                     100.0 * invocation_reduction, 100.0 * runtime_reduction, 100.0 * bytes_reduction, no_reuse.bytes,
                     reuse.bytes, wall_s);
  return out;
}

BenchReport bench_reuse(const EngineConfig &config, const std::string &workload, const std::string &simulator) {
  std::vector<std::string> queries;
  for (const auto &stmt : qlang::parse(workload).statements) {
    if (stmt.kind() == qlang::StatementKind::Select) queries.push_back(qlang::render(stmt));
  }
  const auto start = std::chrono::steady_clock::now();
  BenchReport r;
  r.simulator = simulator;
  r.no_reuse = run(config, queries, false, simulator);
  r.reuse = run(config, queries, true, simulator);
  r.invocation_reduction = reduction(static_cast<double>(r.no_reuse.invocations), static_cast<double>(r.reuse.invocations));
  r.runtime_reduction = reduction(r.no_reuse.sim_seconds, r.reuse.sim_seconds);
  r.bytes_reduction = reduction(static_cast<double>(r.no_reuse.bytes), static_cast<double>(r.reuse.bytes));
  r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace genie::engine
