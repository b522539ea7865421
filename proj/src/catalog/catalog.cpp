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

#include "genie/catalog/catalog.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "genie/error.h"
#include "genie/qlang/render.h"

namespace genie::catalog {

namespace {

constexpr const char *kCatalogFormat = "genie-catalog/1";

std::optional<double> literal_value(const qlang::ExprPtr &e) {
  if (!e || e->kind != qlang::ExprKind::Literal) return std::nullopt;
  if (e->literal_kind == qlang::LiteralKind::Integer) return static_cast<double>(e->integer);
  if (e->literal_kind == qlang::LiteralKind::Real) return e->number;
  return std::nullopt;
}

std::string ddl_text(const qlang::RegisterSimulatorStmt &stmt) {
  qlang::Statement st;
  st.payload = stmt;
  return qlang::render(st);
}

nlohmann::json type_json(const qlang::TypeName &t) {
  nlohmann::json j = {{"tag", qlang::type_tag_name(t.tag)}};
  if (t.length) j["length"] = *t.length;
  return j;
}

qlang::TypeName type_from(const nlohmann::json &j) {
  static const std::map<std::string, qlang::TypeTag> tags = {
      {"INTEGER", qlang::TypeTag::Integer},     {"REAL", qlang::TypeTag::Real},
      {"TEXT", qlang::TypeTag::Text},           {"VARCHAR", qlang::TypeTag::Varchar},
      {"GEOMETRY", qlang::TypeTag::Geometry},   {"TIMESTAMP", qlang::TypeTag::Timestamp},
      {"BOOLEAN", qlang::TypeTag::Boolean}};
  qlang::TypeName t;
  auto it = tags.find(j.at("tag").get<std::string>());
  if (it == tags.end()) throw Error("CorruptCatalog", "unknown type tag");
  t.tag = it->second;
  if (j.contains("length")) t.length = j.at("length").get<int>();
  return t;
}

}  // namespace

const ParameterSpec *SimulatorRegistration::parameter(const std::string &n) const {
  for (const auto &p : parameters) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

const ColumnInfo *TableSchema::column(const std::string &n) const {
  for (const auto &c : columns) {
    if (c.name == n) return &c;
  }
  return nullptr;
}

Catalog::Catalog(AdapterResolver resolver, std::optional<std::filesystem::path> file)
    : resolver_(std::move(resolver)), file_(std::move(file)) {
  if (file_ && std::filesystem::exists(*file_)) {
    std::ifstream in(*file_);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    deserialize(text);
  }
}

SimulatorRegistration Catalog::register_simulator(const qlang::RegisterSimulatorStmt &stmt) {
  std::unique_lock lock(mu_);
  const std::string body = ddl_text(stmt);
  if (auto it = simulators_.find(stmt.name); it != simulators_.end()) {
    if (it->second.body == body) return it->second;
    throw Error("DuplicateSimulator", fmt::format("simulator '{}' is already registered with a different body", stmt.name));
  }
  std::optional<AdapterDescriptor> adapter;
  if (resolver_) adapter = resolver_(stmt.executable_ref, stmt.name);
  if (!adapter) {
    throw Error("UnknownAdapter", fmt::format("no adapter for simulator '{}' (executable '{}')", stmt.name,
                                              stmt.executable_ref));
  }
  SimulatorRegistration reg;
  reg.name = stmt.name;
  reg.adapter_id = adapter->adapter_id;
  reg.executable_ref = stmt.executable_ref;
  reg.output_format = stmt.output_format;
  reg.body = body;
  for (const auto &decl : stmt.parameters) {
    ParameterSpec spec;
    spec.name = decl.name;
    spec.type = decl.type.tag;
    spec.default_value = literal_value(decl.default_value);
    auto known = std::find_if(adapter->parameters.begin(), adapter->parameters.end(),
                              [&](const ParameterSpec &p) { return p.name == decl.name; });
    if (known != adapter->parameters.end()) {
      spec.candidates = known->candidates;
      spec.derived = known->derived;
      if (!spec.default_value && !spec.derived) spec.default_value = known->default_value;
    }
    if (spec.default_value) {
      if (spec.type == qlang::TypeTag::Integer && *spec.default_value != std::floor(*spec.default_value)) {
        throw Error("InvalidParameter", fmt::format("default of INTEGER parameter '{}' is not integral", spec.name));
      }
      if (std::find(spec.candidates.begin(), spec.candidates.end(), *spec.default_value) == spec.candidates.end()) {
        // keep the coarse-to-fine order of the adapter's list
        auto pos = spec.candidates.begin();
        if (spec.name == "particle_count") {
          while (pos != spec.candidates.end() && *pos < *spec.default_value) ++pos;
        } else {
          while (pos != spec.candidates.end() && *pos > *spec.default_value) ++pos;
        }
        spec.candidates.insert(pos, *spec.default_value);
      }
    } else if (!spec.derived) {
      throw Error("InvalidParameter",
                  fmt::format("parameter '{}' has no default and is not derived by adapter '{}'", spec.name,
                              adapter->adapter_id));
    }
    reg.parameters.push_back(std::move(spec));
  }
  reg.order = next_order_++;
  simulators_[reg.name] = reg;
  persist();
  return reg;
}

TableSchema Catalog::create_table(const qlang::CreateTableStmt &stmt) {
  std::unique_lock lock(mu_);
  TableSchema t;
  t.name = stmt.name;
  for (const auto &c : stmt.columns) {
    t.columns.push_back(ColumnInfo{c.name, c.type, c.primary_key, c.references, false});
  }
  if (auto it = tables_.find(stmt.name); it != tables_.end()) {
    const auto &old = it->second.columns;
    bool same = old.size() == t.columns.size();
    for (std::size_t i = 0; same && i < old.size(); ++i) {
      same = old[i].name == t.columns[i].name && old[i].type == t.columns[i].type &&
             old[i].primary_key == t.columns[i].primary_key && old[i].references == t.columns[i].references;
    }
    if (!same) throw Error("DuplicateTable", fmt::format("table '{}' already exists", stmt.name));
    return it->second;
  }
  t.order = next_order_++;
  tables_[t.name] = t;
  persist();
  return t;
}

bool Catalog::reaches(const Attribute &from, const Attribute &to) const {
  // true when `from` depends, directly or transitively, on `to`
  std::set<Attribute> seen;
  std::vector<Attribute> stack{from};
  while (!stack.empty()) {
    Attribute a = stack.back();
    stack.pop_back();
    if (!seen.insert(a).second) continue;
    auto it = columns_.find(a);
    if (it == columns_.end()) continue;
    for (const auto &d : it->second.depends_on) {
      if (d == to) return true;
      stack.push_back(d);
    }
  }
  return false;
}

VirtualColumnDef Catalog::add_virtual_column(const qlang::AlterAddVirtualStmt &stmt) {
  std::unique_lock lock(mu_);
  auto table = tables_.find(stmt.table);
  if (table == tables_.end()) throw Error("UnknownTable", fmt::format("unknown table '{}'", stmt.table));
  for (const auto &s : stmt.simulators) {
    if (!simulators_.count(s)) throw Error("UnknownSimulator", fmt::format("unknown simulator '{}'", s));
  }
  VirtualColumnDef def;
  def.table = stmt.table;
  def.column = stmt.column;
  def.value_type = stmt.value_type;
  def.simulators = stmt.simulators;
  def.ensemble_method = stmt.ensemble_method.value_or("none");
  def.weight_source = stmt.ensemble_weights.value_or("");
  const Attribute self{stmt.table, stmt.column};
  for (const auto &[t, c] : stmt.depends_on) {
    Attribute dep{t, c};
    auto dt = tables_.find(t);
    if (dt == tables_.end() || !dt->second.column(c)) {
      throw Error("UnknownDependency", fmt::format("dependency '{}' does not exist", dep.str()));
    }
    if (dep == self || reaches(dep, self)) {
      throw Error("CyclicDependency", fmt::format("'{}' depending on '{}' would create a cycle", self.str(), dep.str()));
    }
    if (std::find(def.depends_on.begin(), def.depends_on.end(), dep) == def.depends_on.end()) {
      def.depends_on.push_back(dep);
    }
  }
  if (auto it = columns_.find(self); it != columns_.end()) {
    const auto &old = it->second;
    if (old.value_type == def.value_type && old.simulators == def.simulators &&
        old.ensemble_method == def.ensemble_method && old.weight_source == def.weight_source &&
        old.depends_on == def.depends_on) {
      return old;
    }
    throw Error("DuplicateColumn", fmt::format("'{}' is already a virtual column", self.str()));
  }
  // a declared stored column becomes virtual; otherwise the column is added
  auto &cols = table->second.columns;
  auto col = std::find_if(cols.begin(), cols.end(), [&](const ColumnInfo &c) { return c.name == stmt.column; });
  if (col == cols.end()) {
    cols.push_back(ColumnInfo{stmt.column, stmt.value_type, false, std::nullopt, true});
  } else {
    col->type = stmt.value_type;
    col->is_virtual = true;
  }
  def.order = next_order_++;
  columns_[self] = def;
  persist();
  return def;
}

std::vector<PlanNode> Catalog::topo_order(const Attribute &attr) const {
  std::shared_lock lock(mu_);
  if (!columns_.count(attr)) throw Error("NotVirtual", fmt::format("'{}' is not a virtual column", attr.str()));
  // prerequisites reachable from attr through virtual columns
  std::set<Attribute> nodes;
  std::vector<Attribute> stack{attr};
  while (!stack.empty()) {
    Attribute a = stack.back();
    stack.pop_back();
    auto it = columns_.find(a);
    if (it == columns_.end() || !nodes.insert(a).second) continue;
    for (const auto &d : it->second.depends_on) stack.push_back(d);
  }
  std::map<Attribute, int> indegree;
  for (const auto &n : nodes) {
    int k = 0;
    for (const auto &d : columns_.at(n).depends_on) k += nodes.count(d) ? 1 : 0;
    indegree[n] = k;
  }
  auto later = [&](const Attribute &a, const Attribute &b) { return columns_.at(a).order > columns_.at(b).order; };
  std::priority_queue<Attribute, std::vector<Attribute>, decltype(later)> ready(later);
  for (const auto &[n, k] : indegree) {
    if (k == 0) ready.push(n);
  }
  std::vector<PlanNode> out;
  while (!ready.empty()) {
    Attribute a = ready.top();
    ready.pop();
    PlanNode node;
    node.column = columns_.at(a);
    for (const auto &s : node.column.simulators) node.simulators.push_back(simulators_.at(s));
    out.push_back(std::move(node));
    for (const auto &n : nodes) {
      const auto &deps = columns_.at(n).depends_on;
      if (std::find(deps.begin(), deps.end(), a) != deps.end() && --indegree[n] == 0) ready.push(n);
    }
  }
  return out;
}

std::optional<SimulatorRegistration> Catalog::simulator(const std::string &name) const {
  std::shared_lock lock(mu_);
  auto it = simulators_.find(name);
  if (it == simulators_.end()) return std::nullopt;
  return it->second;
}

std::optional<TableSchema> Catalog::table(const std::string &name) const {
  std::shared_lock lock(mu_);
  auto it = tables_.find(name);
  if (it == tables_.end()) return std::nullopt;
  return it->second;
}

std::optional<VirtualColumnDef> Catalog::virtual_column(const Attribute &attr) const {
  std::shared_lock lock(mu_);
  auto it = columns_.find(attr);
  if (it == columns_.end()) return std::nullopt;
  return it->second;
}

namespace {

template <typename Map>
auto by_order(const Map &m) {
  std::vector<typename Map::mapped_type> out;
  for (const auto &[k, v] : m) out.push_back(v);
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.order < b.order; });
  return out;
}

}  // namespace

std::vector<SimulatorRegistration> Catalog::simulators() const {
  std::shared_lock lock(mu_);
  return by_order(simulators_);
}

std::vector<TableSchema> Catalog::tables() const {
  std::shared_lock lock(mu_);
  return by_order(tables_);
}

std::vector<VirtualColumnDef> Catalog::virtual_columns() const {
  std::shared_lock lock(mu_);
  return by_order(columns_);
}

std::vector<std::pair<Attribute, Attribute>> Catalog::edges() const {
  std::shared_lock lock(mu_);
  std::vector<std::pair<Attribute, Attribute>> out;
  for (const auto &def : by_order(columns_)) {
    for (const auto &d : def.depends_on) out.emplace_back(d, def.attribute());
  }
  return out;
}

void Catalog::set_quality(const std::string &simulator, double score) {
  std::unique_lock lock(mu_);
  auto it = simulators_.find(simulator);
  if (it == simulators_.end()) throw Error("UnknownSimulator", fmt::format("unknown simulator '{}'", simulator));
  if (!(score >= 0.0)) throw Error("InvalidArgument", "quality score must be non-negative");
  it->second.quality_score = score;
  persist();
}

nlohmann::json Catalog::to_json() const {
  nlohmann::json sims = nlohmann::json::array();
  for (const auto &s : by_order(simulators_)) {
    nlohmann::json params = nlohmann::json::array();
    for (const auto &p : s.parameters) {
      nlohmann::json j = {{"name", p.name},
                          {"type", qlang::type_tag_name(p.type)},
                          {"candidates", p.candidates},
                          {"derived", p.derived}};
      j["default"] = p.default_value ? nlohmann::json(*p.default_value) : nlohmann::json(nullptr);
      params.push_back(std::move(j));
    }
    sims.push_back({{"name", s.name},
                    {"adapter", s.adapter_id},
                    {"executable", s.executable_ref},
                    {"output_format", s.output_format},
                    {"body", s.body},
                    {"quality_score", s.quality_score},
                    {"order", s.order},
                    {"parameters", std::move(params)}});
  }
  nlohmann::json tables = nlohmann::json::array();
  for (const auto &t : by_order(tables_)) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto &c : t.columns) {
      nlohmann::json j = {{"name", c.name}, {"type", type_json(c.type)}, {"primary_key", c.primary_key},
                          {"virtual", c.is_virtual}};
      j["references"] = c.references ? nlohmann::json{c.references->first, c.references->second}
                                     : nlohmann::json(nullptr);
      cols.push_back(std::move(j));
    }
    tables.push_back({{"name", t.name}, {"order", t.order}, {"columns", std::move(cols)}});
  }
  nlohmann::json vcols = nlohmann::json::array();
  for (const auto &v : by_order(columns_)) {
    nlohmann::json deps = nlohmann::json::array();
    for (const auto &d : v.depends_on) deps.push_back({d.table, d.column});
    vcols.push_back({{"table", v.table},
                     {"column", v.column},
                     {"type", type_json(v.value_type)},
                     {"simulators", v.simulators},
                     {"ensemble_method", v.ensemble_method},
                     {"weight_source", v.weight_source},
                     {"depends_on", std::move(deps)},
                     {"order", v.order}});
  }
  return {{"format", kCatalogFormat},
          {"next_order", next_order_},
          {"simulators", std::move(sims)},
          {"tables", std::move(tables)},
          {"virtual_columns", std::move(vcols)}};
}

std::string Catalog::serialize() const {
  std::shared_lock lock(mu_);
  return to_json().dump(2) + "\n";
}

void Catalog::deserialize(const std::string &text) {
  std::map<std::string, SimulatorRegistration> sims;
  std::map<std::string, TableSchema> tables;
  std::map<Attribute, VirtualColumnDef> cols;
  std::uint64_t next = 1;
  try {
    auto doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != kCatalogFormat) throw Error("CorruptCatalog", "unknown catalog format");
    next = doc.at("next_order").get<std::uint64_t>();
    for (const auto &j : doc.at("simulators")) {
      SimulatorRegistration s;
      s.name = j.at("name").get<std::string>();
      s.adapter_id = j.at("adapter").get<std::string>();
      s.executable_ref = j.at("executable").get<std::string>();
      s.output_format = j.at("output_format").get<std::string>();
      s.body = j.at("body").get<std::string>();
      s.quality_score = j.at("quality_score").get<double>();
      s.order = j.at("order").get<std::uint64_t>();
      for (const auto &pj : j.at("parameters")) {
        ParameterSpec p;
        p.name = pj.at("name").get<std::string>();
        p.type = pj.at("type").get<std::string>() == "INTEGER" ? qlang::TypeTag::Integer : qlang::TypeTag::Real;
        if (!pj.at("default").is_null()) p.default_value = pj.at("default").get<double>();
        p.candidates = pj.at("candidates").get<std::vector<double>>();
        p.derived = pj.at("derived").get<bool>();
        s.parameters.push_back(std::move(p));
      }
      sims[s.name] = std::move(s);
    }
    for (const auto &j : doc.at("tables")) {
      TableSchema t;
      t.name = j.at("name").get<std::string>();
      t.order = j.at("order").get<std::uint64_t>();
      for (const auto &cj : j.at("columns")) {
        ColumnInfo c;
        c.name = cj.at("name").get<std::string>();
        c.type = type_from(cj.at("type"));
        c.primary_key = cj.at("primary_key").get<bool>();
        c.is_virtual = cj.at("virtual").get<bool>();
        if (!cj.at("references").is_null()) {
          c.references = std::make_pair(cj.at("references").at(0).get<std::string>(),
                                        cj.at("references").at(1).get<std::string>());
        }
        t.columns.push_back(std::move(c));
      }
      tables[t.name] = std::move(t);
    }
    for (const auto &j : doc.at("virtual_columns")) {
      VirtualColumnDef v;
      v.table = j.at("table").get<std::string>();
      v.column = j.at("column").get<std::string>();
      v.value_type = type_from(j.at("type"));
      v.simulators = j.at("simulators").get<std::vector<std::string>>();
      v.ensemble_method = j.at("ensemble_method").get<std::string>();
      v.weight_source = j.at("weight_source").get<std::string>();
      for (const auto &d : j.at("depends_on")) {
        v.depends_on.push_back(Attribute{d.at(0).get<std::string>(), d.at(1).get<std::string>()});
      }
      v.order = j.at("order").get<std::uint64_t>();
      cols[v.attribute()] = std::move(v);
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error("CorruptCatalog", fmt::format("catalog: {}", e.what()));
  }
  std::unique_lock lock(mu_);
  simulators_ = std::move(sims);
  tables_ = std::move(tables);
  columns_ = std::move(cols);
  next_order_ = next;
}

void Catalog::persist() const {
  if (!file_) return;
  auto tmp = *file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << to_json().dump(2) << "\n";
    if (!out) throw Error("IOError", fmt::format("cannot write catalog {}", file_->string()));
  }
  std::filesystem::rename(tmp, *file_);
}

}  // namespace genie::catalog
