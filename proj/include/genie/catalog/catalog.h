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
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genie/gridstore/grid_field.h"
#include "genie/qlang/ast.h"

namespace genie::catalog {

using gridstore::Attribute;

struct ParameterSpec {
  std::string name;
  qlang::TypeTag type = qlang::TypeTag::Real;
  std::optional<double> default_value;
  std::vector<double> candidates;  // coarse to fine
  bool derived = false;            // filled by the planner (e.g. run_duration)

  bool operator==(const ParameterSpec &) const = default;
};

struct SimulatorRegistration {
  std::string name;
  std::string adapter_id;
  std::string executable_ref;
  std::vector<ParameterSpec> parameters;
  std::string output_format;
  std::string body;  // canonical DDL text, used for idempotence
  double quality_score = 1.0;
  std::uint64_t order = 0;

  const ParameterSpec *parameter(const std::string &name) const;
};

struct ColumnInfo {
  std::string name;
  qlang::TypeName type;
  bool primary_key = false;
  std::optional<std::pair<std::string, std::string>> references;
  bool is_virtual = false;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnInfo> columns;
  std::uint64_t order = 0;

  const ColumnInfo *column(const std::string &name) const;
};

struct VirtualColumnDef {
  std::string table;
  std::string column;
  qlang::TypeName value_type;
  std::vector<std::string> simulators;
  std::string ensemble_method = "none";
  std::string weight_source;
  std::vector<Attribute> depends_on;
  std::uint64_t order = 0;

  Attribute attribute() const { return Attribute{table, column}; }
};

struct PlanNode {
  VirtualColumnDef column;
  std::vector<SimulatorRegistration> simulators;
};

/// What an adapter registry tells the catalog about an executable.
struct AdapterDescriptor {
  std::string adapter_id;
  std::vector<ParameterSpec> parameters;
};

/// Maps (executable_ref, simulator name) to an adapter; nullopt if none.
using AdapterResolver =
    std::function<std::optional<AdapterDescriptor>(const std::string &executable_ref, const std::string &name)>;

/// Simulators, tables, virtual columns and the column dependency graph.
/// Mutations are serialized and, when a file is set, persisted as
/// canonical JSON ("genie-catalog/1") after each change.
class Catalog {
 public:
  explicit Catalog(AdapterResolver resolver = {}, std::optional<std::filesystem::path> file = std::nullopt);

  /// Errors: DuplicateSimulator, UnknownAdapter, InvalidParameter.
  SimulatorRegistration register_simulator(const qlang::RegisterSimulatorStmt &stmt);
  /// Errors: DuplicateTable (same name, different columns).
  TableSchema create_table(const qlang::CreateTableStmt &stmt);
  /// Errors: UnknownTable, UnknownSimulator, UnknownDependency,
  /// CyclicDependency, DuplicateColumn.
  VirtualColumnDef add_virtual_column(const qlang::AlterAddVirtualStmt &stmt);

  /// Producers before consumers, ties by registration order. Errors: NotVirtual.
  std::vector<PlanNode> topo_order(const Attribute &attr) const;

  std::optional<SimulatorRegistration> simulator(const std::string &name) const;
  std::optional<TableSchema> table(const std::string &name) const;
  std::optional<VirtualColumnDef> virtual_column(const Attribute &attr) const;
  bool is_virtual(const Attribute &attr) const { return virtual_column(attr).has_value(); }

  std::vector<SimulatorRegistration> simulators() const;
  std::vector<TableSchema> tables() const;
  std::vector<VirtualColumnDef> virtual_columns() const;
  /// (producer, consumer) edges between columns.
  std::vector<std::pair<Attribute, Attribute>> edges() const;

  void set_quality(const std::string &simulator, double score);

  nlohmann::json to_json() const;
  std::string serialize() const;
  /// Replaces the contents with a serialized catalog. Errors: CorruptCatalog.
  void deserialize(const std::string &text);

 private:
  void persist() const;
  bool reaches(const Attribute &from, const Attribute &to) const;

  AdapterResolver resolver_;
  std::optional<std::filesystem::path> file_;
  std::map<std::string, SimulatorRegistration> simulators_;
  std::map<std::string, TableSchema> tables_;
  std::map<Attribute, VirtualColumnDef> columns_;
  std::uint64_t next_order_ = 1;
  mutable std::shared_mutex mu_;
};

}  // namespace genie::catalog
