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

#include "genie/qlang/ast.h"

namespace genie::qlang {

const char *type_tag_name(TypeTag tag) {
  switch (tag) {
    case TypeTag::Integer: return "INTEGER";
    case TypeTag::Real: return "REAL";
    case TypeTag::Text: return "TEXT";
    case TypeTag::Varchar: return "VARCHAR";
    case TypeTag::Geometry: return "GEOMETRY";
    case TypeTag::Timestamp: return "TIMESTAMP";
    case TypeTag::Boolean: return "BOOLEAN";
  }
  return "?";
}

const char *binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return "OR";
    case BinaryOp::And: return "AND";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
  }
  return "?";
}

bool is_aggregate_name(const std::string &n) {
  return n == "AVG" || n == "MAX" || n == "MIN" || n == "COUNT" || n == "SUM";
}

bool equal(const ExprPtr &a, const ExprPtr &b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

bool equal(const Expr &a, const Expr &b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Literal:
      if (a.literal_kind != b.literal_kind) return false;
      switch (a.literal_kind) {
        case LiteralKind::Null: return true;
        case LiteralKind::Integer: return a.integer == b.integer;
        case LiteralKind::Real: return a.number == b.number;
        case LiteralKind::String: return a.text == b.text;
      }
      return false;
    case ExprKind::Column:
      return a.qualifier == b.qualifier && a.name == b.name;
    case ExprKind::Star:
      return true;
    case ExprKind::Function:
      if (a.name != b.name) return false;
      break;
    case ExprKind::Unary:
      if (a.unary_op != b.unary_op) return false;
      break;
    case ExprKind::Binary:
      if (a.binary_op != b.binary_op) return false;
      break;
    case ExprKind::Between:
    case ExprKind::InList:
      if (a.negated != b.negated) return false;
      break;
    case ExprKind::InSubquery:
      if (a.negated != b.negated) return false;
      [[fallthrough]];
    case ExprKind::Subquery:
      if (!a.subquery || !b.subquery) return !a.subquery && !b.subquery;
      if (!equal(*a.subquery, *b.subquery)) return false;
      break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal(a.args[i], b.args[i])) return false;
  }
  return true;
}

bool equal(const HintClause &a, const HintClause &b) {
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const auto &x = a.entries[i];
    const auto &y = b.entries[i];
    if (x.key != y.key || x.value.kind != y.value.kind) return false;
    if (x.value.kind == HintValueKind::Number ? x.value.number != y.value.number
                                              : x.value.text != y.value.text) {
      return false;
    }
    if (x.value.normalized != y.value.normalized) return false;
  }
  return true;
}

namespace {

bool equal_ref(const TableRef &a, const TableRef &b) { return a.name == b.name && a.alias == b.alias; }

template <typename T, typename Eq>
bool equal_vec(const std::vector<T> &a, const std::vector<T> &b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool equal(const SelectQuery &a, const SelectQuery &b) {
  if (a.has_from != b.has_from) return false;
  if (a.has_from && !equal_ref(a.from, b.from)) return false;
  if (!equal_vec(a.projections, b.projections, [](const SelectItem &x, const SelectItem &y) {
        return x.alias == y.alias && equal(x.expr, y.expr);
      })) {
    return false;
  }
  if (!equal_vec(a.joins, b.joins, [](const Join &x, const Join &y) {
        return equal_ref(x.table, y.table) && equal(x.on, y.on);
      })) {
    return false;
  }
  if (!equal(a.where, b.where) || !equal(a.having, b.having)) return false;
  if (!equal_vec(a.group_by, b.group_by, [](const ExprPtr &x, const ExprPtr &y) { return equal(x, y); })) {
    return false;
  }
  if (a.hint.has_value() != b.hint.has_value()) return false;
  return !a.hint || equal(*a.hint, *b.hint);
}

bool equal(const Statement &a, const Statement &b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case StatementKind::RegisterSimulator: {
      const auto &x = std::get<RegisterSimulatorStmt>(a.payload);
      const auto &y = std::get<RegisterSimulatorStmt>(b.payload);
      return x.name == y.name && x.executable_ref == y.executable_ref &&
             x.output_format == y.output_format &&
             equal_vec(x.parameters, y.parameters, [](const ParameterDecl &p, const ParameterDecl &q) {
               return p.name == q.name && p.type == q.type && equal(p.default_value, q.default_value);
             });
    }
    case StatementKind::CreateTable: {
      const auto &x = std::get<CreateTableStmt>(a.payload);
      const auto &y = std::get<CreateTableStmt>(b.payload);
      return x.name == y.name && equal_vec(x.columns, y.columns, [](const ColumnDef &p, const ColumnDef &q) {
               return p.name == q.name && p.type == q.type && p.primary_key == q.primary_key &&
                      p.references == q.references;
             });
    }
    case StatementKind::AlterTableAddVirtual: {
      const auto &x = std::get<AlterAddVirtualStmt>(a.payload);
      const auto &y = std::get<AlterAddVirtualStmt>(b.payload);
      return x.table == y.table && x.column == y.column && x.value_type == y.value_type &&
             x.simulators == y.simulators && x.ensemble_method == y.ensemble_method &&
             x.ensemble_weights == y.ensemble_weights && x.depends_on == y.depends_on;
    }
    case StatementKind::Select:
      return equal(std::get<SelectStmt>(a.payload).query, std::get<SelectStmt>(b.payload).query);
  }
  return false;
}

bool equal(const Script &a, const Script &b) {
  return equal_vec(a.statements, b.statements, [](const Statement &x, const Statement &y) { return equal(x, y); });
}

void walk(const ExprPtr &expr, const ExprVisitor &fn) {
  if (!expr) return;
  fn(expr);
  for (const auto &a : expr->args) walk(a, fn);
  if (expr->subquery) walk_query(*expr->subquery, fn);
}

void walk_query(const SelectQuery &q, const ExprVisitor &fn) {
  for (const auto &p : q.projections) walk(p.expr, fn);
  for (const auto &j : q.joins) walk(j.on, fn);
  walk(q.where, fn);
  for (const auto &g : q.group_by) walk(g, fn);
  walk(q.having, fn);
}

}  // namespace genie::qlang
