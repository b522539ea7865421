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

#include "genie/qlang/render.h"

#include <cmath>

#include <fmt/format.h>

#include "genie/qlang/keywords.h"

namespace genie::qlang {

namespace {

bool plain_identifier(const std::string &s) {
  if (s.empty()) return false;
  auto start = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!start(s[0])) return false;
  for (char c : s) {
    if (!start(c) && !(c >= '0' && c <= '9')) return false;
  }
  std::string up;
  for (char c : s) up += static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : c);
  return !is_reserved(up);
}

std::string ident(const std::string &s) {
  if (plain_identifier(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string quote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string real_text(double v) {
  std::string s = fmt::format("{}", v);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string number_text(double v) {
  if (std::nearbyint(v) == v && std::fabs(v) < 1e15) return fmt::format("{}", static_cast<long long>(v));
  return real_text(v);
}

std::string type_text(const TypeName &t) {
  std::string s = type_tag_name(t.tag);
  if (t.length) s += fmt::format("({})", *t.length);
  return s;
}

int precedence(const Expr &e) {
  switch (e.kind) {
    case ExprKind::Binary:
      switch (e.binary_op) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 5;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 6;
        default: return 4;
      }
    case ExprKind::Unary:
      return e.unary_op == UnaryOp::Not ? 3 : 7;
    case ExprKind::Between:
    case ExprKind::InList:
    case ExprKind::InSubquery:
      return 4;
    case ExprKind::Literal:
      if ((e.literal_kind == LiteralKind::Integer && e.integer < 0) ||
          (e.literal_kind == LiteralKind::Real && std::signbit(e.number))) {
        return 7;
      }
      return 8;
    default:
      return 8;
  }
}

std::string expr_text(const Expr &e);

std::string child(const ExprPtr &c, int min_prec) {
  std::string s = expr_text(*c);
  return precedence(*c) < min_prec ? "(" + s + ")" : s;
}

std::string expr_text(const Expr &e) {
  switch (e.kind) {
    case ExprKind::Literal:
      switch (e.literal_kind) {
        case LiteralKind::Null: return "NULL";
        case LiteralKind::Integer: return fmt::format("{}", e.integer);
        case LiteralKind::Real: return real_text(e.number);
        case LiteralKind::String: return quote(e.text);
      }
      return "NULL";
    case ExprKind::Column:
      return e.qualifier.empty() ? ident(e.name) : ident(e.qualifier) + "." + ident(e.name);
    case ExprKind::Star:
      return "*";
    case ExprKind::Function: {
      std::string s = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) s += ", ";
        s += expr_text(*e.args[i]);
      }
      return s + ")";
    }
    case ExprKind::Unary:
      if (e.unary_op == UnaryOp::Not) return "NOT " + child(e.args[0], 3);
      {
        std::string s = child(e.args[0], 7);
        return s[0] == '-' ? "-(" + s + ")" : "-" + s;
      }
    case ExprKind::Binary: {
      int p = precedence(e);
      bool assoc = p != 4;
      return child(e.args[0], assoc ? p : p + 1) + " " + binary_op_text(e.binary_op) + " " +
             child(e.args[1], p + 1);
    }
    case ExprKind::Between:
      return child(e.args[0], 5) + (e.negated ? " NOT BETWEEN " : " BETWEEN ") + child(e.args[1], 5) +
             " AND " + child(e.args[2], 5);
    case ExprKind::InList: {
      std::string s = child(e.args[0], 5) + (e.negated ? " NOT IN (" : " IN (");
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        if (i > 1) s += ", ";
        s += expr_text(*e.args[i]);
      }
      return s + ")";
    }
    case ExprKind::InSubquery:
      return child(e.args[0], 5) + (e.negated ? " NOT IN (" : " IN (") + render(*e.subquery) + ")";
    case ExprKind::Subquery:
      return "(" + render(*e.subquery) + ")";
  }
  return "";
}

std::string table_text(const TableRef &t) {
  return t.alias ? ident(t.name) + " " + ident(*t.alias) : ident(t.name);
}

std::string hint_key(const std::string &key) {
  auto dot = key.find('.');
  if (dot == std::string::npos) return ident(key);
  return ident(key.substr(0, dot)) + "." + ident(key.substr(dot + 1));
}

}  // namespace

std::string render(const Expr &expr) { return expr_text(expr); }

std::string render(const HintClause &hint) {
  std::string s = "WITH HINT (";
  for (std::size_t i = 0; i < hint.entries.size(); ++i) {
    const auto &e = hint.entries[i];
    if (i) s += ", ";
    s += hint_key(e.key) + "=";
    s += e.value.kind == HintValueKind::Number ? number_text(e.value.number) : quote(e.value.text);
  }
  return s + ")";
}

std::string render(const SelectQuery &q) {
  std::string s = "SELECT ";
  for (std::size_t i = 0; i < q.projections.size(); ++i) {
    if (i) s += ", ";
    s += expr_text(*q.projections[i].expr);
    if (q.projections[i].alias) s += " AS " + ident(*q.projections[i].alias);
  }
  if (q.has_from) {
    s += " FROM " + table_text(q.from);
    for (const auto &j : q.joins) s += " JOIN " + table_text(j.table) + " ON " + expr_text(*j.on);
  }
  if (q.where) s += " WHERE " + expr_text(*q.where);
  if (!q.group_by.empty()) {
    s += " GROUP BY ";
    for (std::size_t i = 0; i < q.group_by.size(); ++i) {
      if (i) s += ", ";
      s += expr_text(*q.group_by[i]);
    }
  }
  if (q.having) s += " HAVING " + expr_text(*q.having);
  if (q.hint) s += " " + render(*q.hint);
  return s;
}

std::string render(const Statement &stmt) {
  std::string s;
  switch (stmt.kind()) {
    case StatementKind::RegisterSimulator: {
      const auto &r = std::get<RegisterSimulatorStmt>(stmt.payload);
      s = "REGISTER SIMULATOR " + ident(r.name) + " EXECUTABLE " + quote(r.executable_ref);
      if (!r.parameters.empty()) {
        s += " PARAMETERS (";
        for (std::size_t i = 0; i < r.parameters.size(); ++i) {
          const auto &p = r.parameters[i];
          if (i) s += ", ";
          s += ident(p.name) + " " + type_text(p.type);
          if (p.default_value) s += " DEFAULT " + expr_text(*p.default_value);
        }
        s += ")";
      }
      if (!r.output_format.empty()) s += " OUTPUT_FORMAT " + ident(r.output_format);
      break;
    }
    case StatementKind::CreateTable: {
      const auto &c = std::get<CreateTableStmt>(stmt.payload);
      s = "CREATE TABLE " + ident(c.name) + " (";
      for (std::size_t i = 0; i < c.columns.size(); ++i) {
        const auto &col = c.columns[i];
        if (i) s += ", ";
        s += ident(col.name) + " " + type_text(col.type);
        if (col.primary_key) s += " PRIMARY KEY";
        if (col.references) {
          s += " REFERENCES " + ident(col.references->first) + "(" + ident(col.references->second) + ")";
        }
      }
      s += ")";
      break;
    }
    case StatementKind::AlterTableAddVirtual: {
      const auto &a = std::get<AlterAddVirtualStmt>(stmt.payload);
      s = "ALTER TABLE " + ident(a.table) + " ADD COLUMN " + ident(a.column) + " " + type_text(a.value_type) +
          " GENERATED BY ";
      if (a.simulators.size() == 1) {
        s += "SIMULATOR " + ident(a.simulators[0]);
      } else {
        s += "SIMULATORS (";
        for (std::size_t i = 0; i < a.simulators.size(); ++i) {
          if (i) s += ", ";
          s += ident(a.simulators[i]);
        }
        s += ")";
      }
      if (a.ensemble_method) s += " ENSEMBLE METHOD " + ident(*a.ensemble_method);
      if (a.ensemble_weights) s += " WEIGHTS (" + ident(*a.ensemble_weights) + ")";
      if (!a.depends_on.empty()) {
        s += " DEPENDS ON (";
        for (std::size_t i = 0; i < a.depends_on.size(); ++i) {
          if (i) s += ", ";
          s += ident(a.depends_on[i].first) + "." + ident(a.depends_on[i].second);
        }
        s += ")";
      }
      break;
    }
    case StatementKind::Select:
      s = render(std::get<SelectStmt>(stmt.payload).query);
      break;
  }
  return s + ";";
}

std::string render(const Script &script) {
  std::string s;
  for (std::size_t i = 0; i < script.statements.size(); ++i) {
    if (i) s += "\n";
    s += render(script.statements[i]);
  }
  return s;
}

}  // namespace genie::qlang
