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

#include "genie/engine/engine.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "genie/error.h"
#include "genie/gridstore/field_io.h"
#include "genie/planner/ensemble.h"
#include "genie/qlang/bind.h"
#include "genie/qlang/parser.h"
#include "genie/qlang/render.h"
#include "genie/simkit/scenario.h"

namespace genie::engine {

using gridstore::Attribute;
using gridstore::Extent;
using gridstore::GridField;
using gridstore::QRect;
using Clock = std::chrono::steady_clock;

struct Engine::Query {
  qlang::BoundQuery bound;
  planner::RequirementSpec req;
  std::string text;
};

struct Engine::RunStats {
  int epoch = 1;
  std::size_t invocations = 0;
  std::map<std::string, std::size_t> by_simulator;
  double sim_seconds = 0.0;
  double wall_s = 0.0;
  std::size_t bytes = 0;
  std::vector<coverage::CoverageEntry> entries;
};

struct Engine::Answer {
  ResultSet rows;
  std::map<Attribute, GridField> fields;
  std::map<std::string, std::pair<int, std::int64_t>> grids;  // by table
};

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

QRect hull(const std::vector<QRect> &rects) {
  QRect h = rects.front();
  for (const auto &r : rects) {
    h.i0 = std::min(h.i0, r.i0);
    h.i1 = std::max(h.i1, r.i1);
    h.j0 = std::min(h.j0, r.j0);
    h.j1 = std::max(h.j1, r.j1);
  }
  return h;
}

// (cell, step) pairs a target asks for, cells grown to the grid
std::size_t target_cells(const planner::GridTarget &t, const gridstore::Domain &d) {
  if (t.rects.empty()) return 0;
  std::set<std::pair<int, int>> cells;
  for (const auto &r : t.rects) {
    QRect a = gridstore::align_rect(r, t.sres, d.full_rect());
    for (int i = a.i0; i < a.i1; i += t.sres) {
      for (int j = a.j0; j < a.j1; j += t.sres) cells.emplace(i, j);
    }
  }
  auto [t0, t1] = gridstore::align_span(t.t0, t.t1, t.tres, d.duration());
  return cells.size() * static_cast<std::size_t>((t1 - t0 + t.tres - 1) / t.tres);
}

std::vector<QRect> intersect_all(const std::vector<QRect> &a, const std::vector<QRect> &b) {
  std::vector<QRect> out;
  for (const auto &x : a) {
    for (const auto &y : b) {
      QRect r = x.intersect(y);
      if (!r.empty()) out.push_back(r);
    }
  }
  return gridstore::union_rects(out);
}

bool has_columns(const gridstore::StoredTable &t, std::initializer_list<const char *> names) {
  for (const auto *n : names) {
    if (!t.column_index(n)) return false;
  }
  return true;
}

}  // namespace

nlohmann::json EpochResult::to_json(const gridstore::Domain &domain) const {
  nlohmann::json region_json = nlohmann::json::array();
  for (const auto &r : region) {
    auto b = domain.to_bbox(r);
    region_json.push_back({b.lon_min, b.lat_min, b.lon_max, b.lat_max});
  }
  nlohmann::json grids = nlohmann::json::object();
  for (const auto &[table, g] : answer_grid) {
    grids[table] = {{"spatial_res", gridstore::quanta_degrees(g.first)},
                    {"temporal_res", gridstore::seconds_hours(g.second)}};
  }
  auto rs = rows.to_json();
  return {{"epoch", epoch},
          {"columns", rs["columns"]},
          {"rows", rs["rows"]},
          {"latency_s", latency_s},
          {"invocations", invocations},
          {"invocations_by_simulator", invocations_by_simulator},
          {"covered_fraction", covered_fraction},
          {"sim_seconds", sim_seconds},
          {"run_wall_s", run_wall_s},
          {"bytes", bytes},
          {"estimated_accuracy", estimated_accuracy},
          {"mode", mode},
          {"region", region_json},
          {"answer_grid", grids},
          {"plan", plan}};
}

Engine::Engine(EngineConfig config)
    : config_(std::move(config)), adapters_(simkit::AdapterRegistry::builtin()) {
  config_.validate();
  domain_ = gridstore::Domain(config_.domain, config_.interval);
  std::optional<std::filesystem::path> catalog_file, store_dir, coverage_file, log_file;
  if (config_.state_dir) {
    auto dir = config_.resolve(*config_.state_dir);
    std::filesystem::create_directories(dir);
    catalog_file = dir / "catalog.json";
    store_dir = dir / "store";
    coverage_file = dir / "coverage.json";
    log_file = dir / "queries.jsonl";
  }
  if (config_.log) log_file = config_.resolve(*config_.log);
  catalog_ = std::make_unique<catalog::Catalog>(adapters_.resolver(), catalog_file);
  store_ = std::make_unique<gridstore::Store>(domain_, store_dir);
  coverage_ = std::make_unique<coverage::CoverageMap>(domain_, config_.strict_signature, coverage_file);
  log_ = std::make_unique<coverage::QueryLog>(log_file);

  sim_.domain = domain_;
  sim_.fire = config_.fire;
  sim_.plume = config_.plume;
  sim_.cost = config_.cost;
  sim_.parallel = config_.parallel;
  if (config_.wind) sim_.wind = simkit::load_wind_csv(config_.resolve(*config_.wind), domain_);
  load_data();
}

void Engine::load_data() {
  Session boot;
  if (catalog_->tables().empty() && config_.schema) {
    std::ifstream in(config_.resolve(*config_.schema));
    if (!in) throw Error("ConfigError", fmt::format("cannot read schema {}", config_.schema->string()));
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto script = qlang::parse(text);
    for (const auto &stmt : script.statements) {
      if (stmt.kind() == qlang::StatementKind::Select) continue;
      execute_statement(stmt, text.substr(stmt.span.begin, stmt.span.end - stmt.span.begin), boot, {}, {});
    }
  }
  for (const auto &t : catalog_->tables()) {
    if (store_->table(t.name)) continue;
    std::vector<gridstore::ColumnSchema> cols;
    for (const auto &c : t.columns) cols.push_back({c.name, c.type, c.primary_key, c.references});
    auto &st = store_->create_table(t.name, cols);
    for (const auto &c : t.columns) {
      if (c.is_virtual) st.skip_columns.insert(c.name);
    }
  }
  for (const auto &[table, file] : config_.loads) {
    auto *t = store_->table(table);
    if (!t) throw Error("UnknownTable", fmt::format("load.{}: no such table", table));
    if (t->row_count() == 0) gridstore::ingest_file(*t, config_.resolve(file));
  }
  refresh_ignitions();
}

void Engine::refresh_ignitions() {
  sim_.ignitions.clear();
  for (const auto &name : store_->table_names()) {
    const auto *t = store_->table(name);
    if (t && t->row_count() > 0 && has_columns(*t, {"fire_id", "location", "start_time", "duration", "fire_intensity"})) {
      sim_.ignitions = simkit::ignitions_from_table(*t, domain_);
      return;
    }
  }
}

std::string Engine::signature(const std::string &simulator, const simkit::ParamMap &params) const {
  std::string s = simulator + ":";
  bool first = true;
  for (const auto &[k, v] : params) {
    s += fmt::format("{}{}={}", first ? "" : ",", k, v);
    first = false;
  }
  return s;
}

// ------------------------------------------------------------ statements

StatementResult Engine::execute(const std::string &text, Session &session, const EpochSink &sink,
                                const RunOptions &options) {
  std::lock_guard lock(mu_);
  auto stmt = qlang::parse_statement(text);
  return execute_statement(stmt, text, session, sink, options);
}

std::vector<StatementResult> Engine::run_script(const std::string &text, Session &session, const EpochSink &sink,
                                                const RunOptions &options) {
  std::lock_guard lock(mu_);
  auto script = qlang::parse(text);
  std::vector<StatementResult> out;
  for (const auto &stmt : script.statements) {
    std::string piece = stmt.span.end > stmt.span.begin ? text.substr(stmt.span.begin, stmt.span.end - stmt.span.begin)
                                                         : qlang::render(stmt);
    out.push_back(execute_statement(stmt, piece, session, sink, options));
  }
  return out;
}

StatementResult Engine::execute_statement(const qlang::Statement &stmt, const std::string &text, Session &session,
                                          const EpochSink &sink, const RunOptions &options) {
  StatementResult r;
  r.kind = stmt.kind();
  try {
    switch (stmt.kind()) {
      case qlang::StatementKind::RegisterSimulator: {
        auto reg = catalog_->register_simulator(std::get<qlang::RegisterSimulatorStmt>(stmt.payload));
        r.message = fmt::format("REGISTER SIMULATOR {} (adapter {})", reg.name, reg.adapter_id);
        break;
      }
      case qlang::StatementKind::CreateTable: {
        const auto &ct = std::get<qlang::CreateTableStmt>(stmt.payload);
        auto schema = catalog_->create_table(ct);
        if (!store_->table(schema.name)) {
          std::vector<gridstore::ColumnSchema> cols;
          for (const auto &c : schema.columns) cols.push_back({c.name, c.type, c.primary_key, c.references});
          store_->create_table(schema.name, cols);
        }
        r.message = fmt::format("CREATE TABLE {}", schema.name);
        break;
      }
      case qlang::StatementKind::AlterTableAddVirtual: {
        auto def = catalog_->add_virtual_column(std::get<qlang::AlterAddVirtualStmt>(stmt.payload));
        if (auto *t = store_->table(def.table)) t->skip_columns.insert(def.column);
        r.message = fmt::format("ALTER TABLE {} ADD COLUMN {}", def.table, def.column);
        break;
      }
      case qlang::StatementKind::Select:
        r.epochs = run_select(std::get<qlang::SelectStmt>(stmt.payload).query, text, session, sink, options);
        r.message = fmt::format("{} epochs", r.epochs.size());
        break;
    }
  } catch (const Error &e) {
    if (stmt.span.line > 1 || stmt.span.column > 1) {
      throw Error(e.code(), fmt::format("statement at {}:{}: {}", stmt.span.line, stmt.span.column, e.what()));
    }
    throw;
  }
  return r;
}

// ---------------------------------------------------------------- SELECT

planner::ParameterAssignment Engine::assign(const Query &q, const planner::EpochSpec &spec,
                                            const planner::RequirementSpec &req) {
  if (spec.full_domain) return planner::fixed_parameters(req, *catalog_, spec.spatial_res, spec.temporal_res);
  auto a = planner::select_parameters(req, *catalog_);
  if (spec.optimize) {
    for (const auto &attr : req.attributes) {
      auto nodes = catalog_->topo_order(attr);
      if (nodes.back().simulators.empty()) continue;
      const auto &reg = nodes.back().simulators.front();
      const auto &adapter = adapters_.get(reg.adapter_id);
      auto t = planner::target_of(req, domain_, attr, 1, 1);
      auto best = planner::optimize_parameters(adapter, reg.parameters, domain_, t.extents(), req.accuracy_floor,
                                               sim_.cost);
      for (const auto &[k, v] : best.params) a.params[reg.name][k] = v;
      a.spatial_res = best.params.count("spatial_res") ? best.params.at("spatial_res") : a.spatial_res;
      a.temporal_res = best.params.count("temporal_res") ? best.params.at("temporal_res") : a.temporal_res;
    }
    a.source = "optimizer";
    return a;
  }
  (void)q;
  for (auto &[sim, p] : a.params) {
    p["spatial_res"] = spec.spatial_res;
    p["temporal_res"] = spec.temporal_res;
  }
  a.spatial_res = spec.spatial_res;
  a.temporal_res = spec.temporal_res;
  if (!spec.use_hints) a.source = "ladder";
  return a;
}

void Engine::run_plan(const planner::ExecutionPlan &plan, RunStats &stats) {
  std::map<std::string, std::vector<GridField>> members;
  auto keep = [&](GridField field, const std::string &sig, double runtime, std::uint64_t invocation) {
    if (field.param_signature.empty()) field.param_signature = sig;
    coverage::CoverageEntry e;
    e.attribute = field.attribute;
    e.extent = field.extent;
    e.sres = field.sres;
    e.tres = field.tres;
    e.param_signature = field.param_signature;
    e.epoch = stats.epoch;
    e.runtime_s = runtime;
    e.invocation = invocation;
    auto report = store_->materialize(std::move(field));
    stats.bytes += report.bytes;
    e.id = coverage_->record(e);
    stats.entries.push_back(e);
  };

  for (const auto &step : plan.steps) {
    if (step.kind == planner::StepKind::Generate) {
      auto reg = catalog_->simulator(step.simulator);
      if (!reg) throw Error("UnknownSimulator", fmt::format("simulator '{}' is not registered", step.simulator));
      const auto &adapter = adapters_.get(reg->adapter_id);
      simkit::SimRequest req;
      req.simulator = step.simulator;
      req.attribute = step.attribute;
      req.extents = step.extents;
      req.params = step.params;
      req.seed = config_.seed;
      std::vector<GridField> inputs;
      inputs.reserve(step.inputs.size());
      for (const auto &dep : step.inputs) {
        auto ext = adapter.input_extent(domain_, req, sim_);
        if (!ext || ext->empty()) continue;
        inputs.push_back(store_->read(dep, ext->rect, ext->t0, ext->t1, step.sres,
                                      std::max(step.tres, planner::kUpstreamMinTres)));
      }
      for (std::size_t k = 0; k < inputs.size(); ++k) req.inputs[inputs[k].attribute] = &inputs[k];
      if (step.attribute.table == "fire_emissions" || !step.inputs.empty()) refresh_ignitions();
      auto result = adapter.execute(req, sim_);
      std::uint64_t invocation = next_invocation_++;
      ++stats.invocations;
      ++stats.by_simulator[step.simulator];
      stats.sim_seconds += step.estimate.seconds;
      stats.wall_s += result.wall_s;
      auto sig = signature(step.simulator, step.params);
      if (step.member) {
        members[step.simulator] = std::move(result.fields);
        continue;
      }
      for (auto &f : result.fields) keep(std::move(f), sig, result.wall_s, invocation);
    } else if (step.kind == planner::StepKind::Ensemble) {
      std::size_t n = step.extents.size();
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<GridField> fields;
        for (const auto &m : step.members) {
          auto it = members.find(m);
          if (it == members.end() || it->second.size() <= k) {
            throw Error("MissingInput", fmt::format("ensemble member '{}' produced no field", m));
          }
          fields.push_back(it->second[k]);
        }
        auto combined = planner::ensemble_combine(fields, step.weights);
        combined.param_signature = "ensemble";
        keep(std::move(combined), "ensemble", 0.0, next_invocation_ - 1);
      }
      members.clear();
    }
  }
}

Engine::Answer Engine::answer_on_grid(const Query &q, const planner::RequirementSpec &req,
                                      const std::map<Attribute, std::pair<int, std::int64_t>> &grids) {
  Answer a;
  for (const auto &[attr, g] : grids) {
    auto t = planner::target_of(req, domain_, attr, g.first, g.second);
    a.grids[attr.table] = g;
    if (t.rects.empty()) continue;
    Extent want;
    want.rect = gridstore::align_rect(hull(t.rects), g.first, domain_.full_rect());
    std::tie(want.t0, want.t1) = gridstore::align_span(t.t0, t.t1, g.second, domain_.duration());
    auto common = store_->common_grid(attr, want);
    GridField f;
    if (!common) {
      f = GridField::make(attr, g.first, g.second, want);
      std::fill(f.values.begin(), f.values.end(), std::numeric_limits<double>::quiet_NaN());
    } else if (g.first % common->first == 0 && g.second % common->second == 0) {
      auto painted = store_->paint(attr, want, common->first, common->second);
      f = *common == g ? std::move(painted.field) : gridstore::aggregate(painted.field, g.first, g.second);
    } else {
      int s = std::gcd(g.first, common->first);
      std::int64_t ts = std::gcd(g.second, common->second);
      f = store_->paint(attr, want, s, ts).field;
    }
    a.fields.emplace(attr, std::move(f));
  }

  DataSource data{*catalog_, *store_, {}};
  for (const auto &[attr, f] : a.fields) {
    auto &gt = data.grids[attr.table];
    if (!gt.grid) gt.grid = &f;
    if (f.extent == gt.grid->extent && f.sres == gt.grid->sres && f.tres == gt.grid->tres) {
      gt.columns[attr.column] = &f;
    } else {
      throw Error("GeometryMismatch", fmt::format("{} is not on the grid of {}", attr.str(), attr.table));
    }
  }
  a.rows = evaluate(q.bound, data);
  return a;
}

Engine::Answer Engine::answer(const Query &q, const planner::RequirementSpec &req, const planner::ExecutionPlan &plan) {
  std::map<Attribute, std::pair<int, std::int64_t>> grids;
  std::map<std::string, std::pair<int, std::int64_t>> by_table;
  for (const auto &t : plan.targets) {
    auto [it, fresh] = by_table.emplace(t.attribute.table, std::make_pair(t.sres, t.tres));
    grids[t.attribute] = it->second;
  }
  return answer_on_grid(q, req, grids);
}

std::vector<EpochResult> Engine::run_select(const qlang::SelectQuery &query, const std::string &text, Session &session,
                                            const EpochSink &sink, const RunOptions &options,
                                            const std::optional<gridstore::BBox> &refine_box) {
  const auto start = Clock::now();
  Query q;
  q.text = text;
  q.bound = qlang::bind(query, *catalog_, store_.get());
  q.req = planner::extract_requirements(q.bound, *catalog_, *store_, config_.floors);
  refresh_ignitions();

  const auto mode = options.mode.value_or(config_.mode);
  std::optional<double> threshold;
  for (const auto &attr : q.req.attributes) {
    if (auto t = config_.threshold(attr)) {
      threshold = t;
      break;
    }
  }
  auto schedule = planner::schedule_epochs(q.req, threshold, mode, config_.ladder);
  if (refine_box) {
    double s = q.req.hint("spatial_res").value_or(config_.ladder.fine_s);
    double t = q.req.hint("temporal_res").value_or(config_.ladder.fine_t);
    schedule.epochs = {planner::EpochSpec{3, s, t, planner::EpochRegion::Explicit, false, true}};
  }

  planner::PlanInputs inputs{*catalog_, *coverage_, adapters_, sim_};
  std::vector<EpochResult> out;
  std::optional<Answer> first;
  coverage::QueryLogRecord rec;
  rec.timestamp = coverage_->now();
  rec.query_hash = coverage::fnv1a_hex(text);
  rec.text = text;
  rec.label = options.label;
  rec.extent = q.req.extent;
  rec.interval = q.req.interval;

  for (const auto &spec : schedule.epochs) {
    if (spec.region == planner::EpochRegion::Explicit && !refine_box) continue;
    planner::RequirementSpec req = q.req;
    if (spec.full_domain) {
      req.extent = {domain_.bbox()};
      req.interval = domain_.interval();
      req.full_domain = true;
    }
    std::vector<QRect> clip;
    bool clipped = false;
    if (spec.region == planner::EpochRegion::OverThreshold) {
      if (!first || !schedule.threshold) continue;
      for (const auto &attr : q.req.attributes) {
        auto thr = config_.threshold(attr);
        auto it = first->fields.find(attr);
        if (!thr || it == first->fields.end()) continue;
        auto over = planner::refine_region(it->second, *thr);
        auto t = planner::target_of(q.req, domain_, attr, it->second.sres, it->second.tres);
        for (const auto &r : intersect_all(over, t.rects)) clip.push_back(r);
      }
      clip = gridstore::union_rects(clip);
      if (clip.empty()) continue;
      clipped = true;
    } else if (spec.region == planner::EpochRegion::Explicit) {
      QRect r = domain_.to_rect(*refine_box);
      if (!r.empty()) clip.push_back(r);
      clipped = true;
    }

    auto assignment = assign(q, spec, req);
    auto plan = planner::build_plan(req, assignment, inputs, spec.epoch, clipped ? &clip : nullptr);

    std::size_t wanted = 0, missing = 0;
    for (const auto &t : plan.targets) {
      if (t.rects.empty()) continue;
      wanted += target_cells(t, domain_);
      missing += coverage_->find_gaps(t.request()).cell_count();
    }

    RunStats stats;
    stats.epoch = spec.epoch;
    run_plan(plan, stats);
    if (spec.epoch > 1 && stats.invocations == 0 && !refine_box) continue;

    Answer ans = answer(q, q.req, plan);
    EpochResult er;
    er.epoch = spec.epoch;
    er.rows = std::move(ans.rows);
    er.invocations = stats.invocations;
    er.invocations_by_simulator = stats.by_simulator;
    er.covered_fraction = wanted ? 1.0 - static_cast<double>(missing) / static_cast<double>(wanted) : 1.0;
    er.sim_seconds = stats.sim_seconds;
    er.run_wall_s = stats.wall_s;
    er.bytes = stats.bytes;
    er.estimated_accuracy = plan.estimated_accuracy();
    er.mode = planner::mode_name(mode);
    if (clipped) {
      for (const auto &t : plan.targets) {
        for (const auto &r : t.rects) er.region.push_back(r);
      }
      er.region = gridstore::union_rects(er.region);
    }
    er.answer_grid = ans.grids;
    er.plan = plan.to_json(domain_);
    er.plan["source"] = assignment.source;
    er.plan["accuracy_class"] = planner::class_name(q.req.accuracy_class);
    er.plan["accuracy_floor"] = q.req.accuracy_floor;
    er.latency_s = seconds_since(start);
    for (const auto &[sim, p] : assignment.params) rec.params[sim] = p;
    rec.epoch_latencies_s.push_back(er.latency_s);
    rec.invocations += er.invocations;
    rec.sim_seconds += er.sim_seconds;
    rec.bytes += er.bytes;
    if (spec.epoch == 1) first = std::move(ans);
    if (sink) sink(er);
    out.push_back(std::move(er));
  }

  rec.wall_seconds = seconds_since(start);
  log_->append(rec);
  session.last_query = text;
  if (!out.empty()) session.last_epoch = out.back().epoch;
  return out;
}

std::vector<EpochResult> Engine::refine(Session &session, const gridstore::BBox &region, const std::string &hint,
                                        const EpochSink &sink) {
  std::lock_guard lock(mu_);
  if (!session.last_query || session.last_epoch < 1) {
    throw Error("NoPriorQuery", "refine needs a completed query in this session");
  }
  auto stmt = qlang::parse_statement(*session.last_query);
  if (stmt.kind() != qlang::StatementKind::Select) throw Error("NoPriorQuery", "the last statement was not a SELECT");
  auto query = std::get<qlang::SelectStmt>(stmt.payload).query;
  auto text = *session.last_query;
  if (!hint.empty()) query.hint = qlang::parse_hint(hint);
  auto out = run_select(query, text, session, sink, {}, region);
  session.last_query = text;
  return out;
}

std::vector<coverage::CoverageEntry> Engine::warm_start(double budget_s) {
  std::lock_guard lock(mu_);
  if (budget_s < 0.0) throw Error("InvalidArgument", "budget must be >= 0");
  std::vector<coverage::CoverageEntry> out;
  if (budget_s == 0.0) return out;
  refresh_ignitions();

  std::vector<Attribute> order;
  auto columns = catalog_->virtual_columns();
  std::sort(columns.begin(), columns.end(), [](const auto &a, const auto &b) { return a.order < b.order; });
  for (const auto &c : columns) {
    for (const auto &node : catalog_->topo_order(c.attribute())) {
      auto attr = node.column.attribute();
      if (std::find(order.begin(), order.end(), attr) == order.end()) order.push_back(attr);
    }
  }

  const double s = config_.ladder.coarse_s, t = config_.ladder.coarse_t;
  const int q = gridstore::resolution_quanta(s);
  planner::PlanInputs inputs{*catalog_, *coverage_, adapters_, sim_};
  double left = budget_s;
  for (const auto &attr : order) {
    if (catalog_->topo_order(attr).back().simulators.empty()) continue;
    for (int i = 0; i < domain_.lat_quanta(); i += q) {
      for (int j = 0; j < domain_.lon_quanta(); j += q) {
        QRect tile{i, std::min(i + q, domain_.lat_quanta()), j, std::min(j + q, domain_.lon_quanta())};
        planner::RequirementSpec req;
        req.attributes = {attr};
        req.extent = {domain_.to_bbox(tile)};
        req.interval = domain_.interval();
        req.full_domain = true;
        auto a = planner::fixed_parameters(req, *catalog_, s, t);
        auto plan = planner::build_plan(req, a, inputs, 0);
        double cost = plan.estimated_seconds();
        if (cost > left) return out;
        left -= cost;
        RunStats stats;
        stats.epoch = 0;
        run_plan(plan, stats);
        for (auto &e : stats.entries) out.push_back(std::move(e));
      }
    }
  }
  return out;
}

std::string Engine::explain(const std::string &text, std::optional<planner::PlanMode> mode) {
  std::lock_guard lock(mu_);
  auto stmt = qlang::parse_statement(text);
  if (stmt.kind() != qlang::StatementKind::Select) return qlang::render(stmt) + "\n";
  Query q;
  q.bound = qlang::bind(std::get<qlang::SelectStmt>(stmt.payload).query, *catalog_, store_.get());
  q.req = planner::extract_requirements(q.bound, *catalog_, *store_, config_.floors);
  auto m = mode.value_or(config_.mode);
  std::optional<double> threshold;
  for (const auto &attr : q.req.attributes) {
    if (auto t = config_.threshold(attr); t && !threshold) threshold = t;
  }
  auto schedule = planner::schedule_epochs(q.req, threshold, m, config_.ladder);
  std::string out = fmt::format("mode {}, class {}, accuracy floor {:.2f}\n", planner::mode_name(m),
                                planner::class_name(q.req.accuracy_class), q.req.accuracy_floor);
  for (const auto &b : q.req.extent) {
    out += fmt::format("extent [{:.3f}, {:.3f}] x [{:.3f}, {:.3f}]\n", b.lat_min, b.lat_max, b.lon_min, b.lon_max);
  }
  out += fmt::format("interval {} .. {}\n", gridstore::format_timestamp(q.req.interval.start),
                     gridstore::format_timestamp(q.req.interval.end));
  planner::PlanInputs inputs{*catalog_, *coverage_, adapters_, sim_};
  for (const auto &spec : schedule.epochs) {
    if (spec.region == planner::EpochRegion::OverThreshold) {
      out += fmt::format("epoch {}: cells above {} after epoch 1, at {}° / {} h\n", spec.epoch, *schedule.threshold,
                         spec.spatial_res, spec.temporal_res);
      continue;
    }
    if (spec.region == planner::EpochRegion::Explicit) {
      out += fmt::format("epoch {}: on refine request, at {}° / {} h\n", spec.epoch, spec.spatial_res,
                         spec.temporal_res);
      continue;
    }
    auto req = q.req;
    if (spec.full_domain) {
      req.extent = {domain_.bbox()};
      req.interval = domain_.interval();
    }
    auto plan = planner::build_plan(req, assign(q, spec, req), inputs, spec.epoch);
    out += plan.explain(domain_);
  }
  return out;
}

ResultSet Engine::evaluate_at(const std::string &text, int sres, std::int64_t tres) {
  std::lock_guard lock(mu_);
  auto stmt = qlang::parse_statement(text);
  if (stmt.kind() != qlang::StatementKind::Select) throw Error("InvalidArgument", "evaluate_at needs a SELECT");
  Query q;
  q.bound = qlang::bind(std::get<qlang::SelectStmt>(stmt.payload).query, *catalog_, store_.get());
  q.req = planner::extract_requirements(q.bound, *catalog_, *store_, config_.floors);
  std::map<Attribute, std::pair<int, std::int64_t>> grids;
  for (const auto &attr : q.req.attributes) grids[attr] = {sres, tres};
  return answer_on_grid(q, q.req, grids).rows;
}

void Engine::reset_state() {
  std::lock_guard lock(mu_);
  coverage_->clear();
  store_->clear_fields();
}

}  // namespace genie::engine
