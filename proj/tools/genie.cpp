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

// genie: command-line front end.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "genie/engine/bench.h"
#include "genie/engine/engine.h"
#include "genie/engine/service.h"
#include "genie/error.h"
#include "genie/planner/epochs.h"

using namespace genie;
using namespace genie::engine;

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("IOError", fmt::format("cannot read {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EngineConfig load_config(const std::string &path) {
  return path.empty() ? EngineConfig::demo() : EngineConfig::load(path);
}

void print_epoch(const EpochResult &e, const gridstore::Domain &domain, bool json) {
  if (json) {
    std::cout << e.to_json(domain).dump() << "\n" << std::flush;
    return;
  }
  std::cout << fmt::format("-- epoch {} ({}): {:.2f} s, {} invocations, {:.0f}% covered, model {:.1f} s\n", e.epoch,
                           e.mode, e.latency_s, e.invocations, 100.0 * e.covered_fraction, e.sim_seconds);
  std::cout << e.rows.to_text() << std::flush;
}

void print_result(const StatementResult &r) {
  if (r.kind != qlang::StatementKind::Select) std::cout << r.message << "\n";
}

gridstore::BBox parse_bbox(const std::string &text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) v.push_back(std::stod(part));
  if (v.size() != 4) throw Error("InvalidArgument", "bbox is lon_min,lat_min,lon_max,lat_max");
  return {v[1], v[3], v[0], v[2]};
}

int repl(Engine &engine, bool json) {
  Session session;
  auto sink = [&](const EpochResult &e) { print_epoch(e, engine.domain(), json); };
  std::string buffer, line;
  std::cout << "genie " << kVersion << ". End statements with ';'. \\refine <bbox> [hint], \\explain <query>, \\q\n";
  while (std::cout << (buffer.empty() ? "genie> " : "   ..> ") << std::flush, std::getline(std::cin, line)) {
    try {
      if (buffer.empty() && line.rfind("\\q", 0) == 0) break;
      if (buffer.empty() && line.rfind("\\refine ", 0) == 0) {
        std::stringstream ss(line.substr(8));
        std::string box, hint;
        ss >> box;
        std::getline(ss, hint);
        engine.refine(session, parse_bbox(box), hint, sink);
        continue;
      }
      if (buffer.empty() && line.rfind("\\explain ", 0) == 0) {
        std::cout << engine.explain(line.substr(9));
        continue;
      }
      buffer += line + "\n";
      if (line.find(';') == std::string::npos) continue;
      auto text = std::move(buffer);
      buffer.clear();
      for (const auto &r : engine.run_script(text, session, sink)) print_result(r);
    } catch (const Error &e) {
      std::cout << "error " << e.code() << ": " << e.what() << "\n";
      buffer.clear();
    }
  }
  return 0;
}

Service *active_service = nullptr;

void on_signal(int) {
  if (active_service) active_service->stop();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"genie: queries over simulator-generated columns"};
  app.require_subcommand(1);
  std::string config_path, mode;
  bool json = false;
  app.add_option("--config", config_path, "engine config file (default: bundled demo)");
  app.add_option("--mode", mode, "progressive, adaptive, optimize, static_high or static_low");
  app.add_flag("--json", json, "print epochs as JSON lines");
  app.set_version_flag("--version", std::string(kVersion));

  app.add_subcommand("repl", "interactive statement loop");

  auto *run = app.add_subcommand("run", "execute a script");
  std::string script;
  run->add_option("script", script, "SQL script")->required()->check(CLI::ExistingFile);

  auto *serve = app.add_subcommand("serve", "HTTP JSON API");
  std::string host = "127.0.0.1";
  int port = -1;
  serve->add_option("--host", host, "listen address");
  serve->add_option("--port", port, "listen port (default: from config)");

  auto *bench = app.add_subcommand("bench", "workload benchmarks");
  bench->require_subcommand(1);
  auto *reuse = bench->add_subcommand("reuse", "compare a workload with and without reuse");
  std::string workload, simulator = "hysplit";
  reuse->add_option("workload", workload, "SQL workload")->required()->check(CLI::ExistingFile);
  reuse->add_option("--simulator", simulator, "simulator whose invocations are counted");

  auto *explain = app.add_subcommand("explain", "show the epoch plans of a query");
  std::string query;
  explain->add_option("query", query, "SELECT statement")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    auto config = load_config(config_path);
    if (!mode.empty()) config.mode = planner::parse_mode(mode);

    if (reuse->parsed()) {
      auto report = bench_reuse(config, slurp(workload), simulator);
      std::cout << (json ? report.to_json().dump(2) + "\n" : report.to_text());
      return 0;
    }

    Engine engine(config);
    if (app.got_subcommand("repl")) return repl(engine, json);
    if (run->parsed()) {
      Session session;
      auto results = engine.run_script(slurp(script), session,
                                       [&](const EpochResult &e) { print_epoch(e, engine.domain(), json); });
      if (!json) {
        for (const auto &r : results) print_result(r);
      }
      return 0;
    }
    if (explain->parsed()) {
      std::cout << engine.explain(query);
      return 0;
    }
    if (serve->parsed()) {
      if (config.warm_start_budget_s > 0.0) {
        auto entries = engine.warm_start(config.warm_start_budget_s);
        std::cerr << fmt::format("warm start: {} fields\n", entries.size());
      }
      Service service(engine, config.workers);
      int bound = service.bind(host, port >= 0 ? port : config.port);
      active_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << fmt::format("listening on http://{}:{}\n", host, bound);
      service.run();
      active_service = nullptr;
      return 0;
    }
  } catch (const Error &e) {
    std::cerr << "error " << e.code() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
