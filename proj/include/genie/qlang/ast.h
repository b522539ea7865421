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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace genie::qlang {

/// Byte range of a node in the source text plus the 1-based position of its
/// first byte. Spans never take part in AST equality.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

enum class TypeTag { Integer, Real, Text, Varchar, Geometry, Timestamp, Boolean };

struct TypeName {
  TypeTag tag = TypeTag::Real;
  std::optional<int> length;  // VARCHAR(n)

  bool operator==(const TypeName &) const = default;
};

const char *type_tag_name(TypeTag tag);

struct SelectQuery;

enum class ExprKind {
  Literal,
  Column,
  Star,
  Function,
  Unary,
  Binary,
  Between,
  InList,
  InSubquery,
  Subquery,
};

enum class LiteralKind { Null, Integer, Real, String };

enum class UnaryOp { Not, Neg };

enum class BinaryOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div };

const char *binary_op_text(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

/// One expression node. Fields are used according to `kind`:
///  - Literal: literal_kind, text (source spelling), integer / number
///  - Column: qualifier (may be empty), name
///  - Function: name (upper-cased), args
///  - Unary / Binary: unary_op / binary_op, args (1 or 2 operands)
///  - Between: args = {subject, low, high}, negated
///  - InList: args = {subject, items...}, negated
///  - InSubquery: args = {subject}, subquery, negated
///  - Subquery: subquery (scalar)
struct Expr {
  ExprKind kind = ExprKind::Literal;
  Span span;

  LiteralKind literal_kind = LiteralKind::Null;
  std::string text;
  std::int64_t integer = 0;
  double number = 0.0;

  std::string qualifier;
  std::string name;

  UnaryOp unary_op = UnaryOp::Not;
  BinaryOp binary_op = BinaryOp::And;
  bool negated = false;

  std::vector<ExprPtr> args;
  std::shared_ptr<SelectQuery> subquery;
};

bool equal(const Expr &a, const Expr &b);
bool equal(const ExprPtr &a, const ExprPtr &b);

bool is_aggregate_name(const std::string &upper_name);

struct SelectItem {
  ExprPtr expr;
  std::optional<std::string> alias;
  Span span;
};

struct TableRef {
  std::string name;
  std::optional<std::string> alias;
  Span span;

  const std::string &visible_name() const { return alias ? *alias : name; }
};

struct Join {
  TableRef table;
  ExprPtr on;
  Span span;
};

enum class HintValueKind { Number, String };

/// A hint scalar. `normalized` holds the value converted to degrees
/// (spatial keys) or hours (temporal keys) when a numeric reading exists.
struct HintValue {
  HintValueKind kind = HintValueKind::Number;
  std::string text;  // number spelling or string contents
  double number = 0.0;
  std::optional<double> normalized;
};

struct HintEntry {
  std::string key;  // "spatial_res" or "hysplit.particle_count"
  HintValue value;
  Span span;
};

struct HintClause {
  std::vector<HintEntry> entries;
  Span span;
};

struct SelectQuery {
  std::vector<SelectItem> projections;
  TableRef from;
  bool has_from = false;
  std::vector<Join> joins;
  ExprPtr where;
  std::vector<ExprPtr> group_by;
  ExprPtr having;
  std::optional<HintClause> hint;
  Span span;
};

bool equal(const SelectQuery &a, const SelectQuery &b);
bool equal(const HintClause &a, const HintClause &b);

struct ParameterDecl {
  std::string name;
  TypeName type;
  ExprPtr default_value;  // numeric literal or null
  Span span;
};

struct RegisterSimulatorStmt {
  std::string name;
  std::string executable_ref;
  std::vector<ParameterDecl> parameters;
  std::string output_format;
};

struct ColumnDef {
  std::string name;
  TypeName type;
  bool primary_key = false;
  std::optional<std::pair<std::string, std::string>> references;
  Span span;
};

struct CreateTableStmt {
  std::string name;
  std::vector<ColumnDef> columns;
};

struct AlterAddVirtualStmt {
  std::string table;
  std::string column;
  TypeName value_type;
  std::vector<std::string> simulators;
  std::optional<std::string> ensemble_method;
  std::optional<std::string> ensemble_weights;
  std::vector<std::pair<std::string, std::string>> depends_on;
};

struct SelectStmt {
  SelectQuery query;
};

enum class StatementKind { RegisterSimulator, CreateTable, AlterTableAddVirtual, Select };

struct Statement {
  std::variant<RegisterSimulatorStmt, CreateTableStmt, AlterAddVirtualStmt, SelectStmt> payload;
  Span span;

  StatementKind kind() const { return static_cast<StatementKind>(payload.index()); }
};

struct Script {
  std::vector<Statement> statements;
};

bool equal(const Statement &a, const Statement &b);
bool equal(const Script &a, const Script &b);

using ExprVisitor = std::function<void(const ExprPtr &)>;

/// Visits `expr` and every expression nested below it, including the
/// expressions of subqueries, in pre-order.
void walk(const ExprPtr &expr, const ExprVisitor &fn);
void walk_query(const SelectQuery &q, const ExprVisitor &fn);

}  // namespace genie::qlang
