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

#include "genie/qlang/bind.h"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::qlang {

namespace {

struct TableColumns {
  std::vector<std::string> names;
  std::set<std::string> virtual_names;
};

struct Scope {
  std::vector<BoundTable> tables;
  std::vector<TableColumns> columns;
  const std::vector<SelectItem> *projections = nullptr;
  const Scope *parent = nullptr;
};

class Binder {
 public:
  Binder(const catalog::Catalog &catalog, const gridstore::Store *store) : catalog_(catalog), store_(store) {}

  BoundQuery bind_query(const SelectQuery &q, const Scope *parent) {
    BoundQuery out;
    out.query = q;
    Scope scope;
    scope.parent = parent;
    scope.projections = &out.query.projections;
    std::set<std::string> visible;
    auto add_table = [&](const TableRef &ref) {
      if (!visible.insert(ref.visible_name()).second) {
        throw Error("DuplicateAlias", fmt::format("{}:{}: table name '{}' is used twice", ref.span.line,
                                                  ref.span.column, ref.visible_name()));
      }
      TableColumns cols = lookup_table(ref);
      BoundTable t{ref.name, ref.visible_name(), !cols.virtual_names.empty()};
      scope.tables.push_back(t);
      scope.columns.push_back(std::move(cols));
    };
    if (out.query.has_from) add_table(out.query.from);
    for (const auto &j : out.query.joins) add_table(j.table);
    out.tables = scope.tables;

    for (const auto &p : out.query.projections) expr(p.expr, scope, out, false);
    for (const auto &j : out.query.joins) expr(j.on, scope, out, false);
    expr(out.query.where, scope, out, false);
    for (const auto &g : out.query.group_by) expr(g, scope, out, true);
    expr(out.query.having, scope, out, true);
    check_aggregates(out);
    return out;
  }

 private:
  TableColumns lookup_table(const TableRef &ref) {
    TableColumns cols;
    if (auto schema = catalog_.table(ref.name)) {
      for (const auto &c : schema->columns) {
        cols.names.push_back(c.name);
        if (c.is_virtual) cols.virtual_names.insert(c.name);
      }
      return cols;
    }
    if (store_) {
      if (const auto *t = store_->table(ref.name)) {
        for (const auto &c : t->columns()) cols.names.push_back(c.name);
        return cols;
      }
    }
    throw Error("UnknownTable", fmt::format("{}:{}: unknown table '{}'", ref.span.line, ref.span.column, ref.name));
  }

  void annotate(const Expr &e, const Scope &scope, std::size_t t, int depth, BoundQuery &out) {
    BoundColumn bc;
    bc.table = t;
    bc.depth = depth;
    bc.column = e.name;
    if (scope.columns[t].virtual_names.count(e.name)) {
      bc.cls = ColumnClass::Virtual;
      bc.def = catalog_.virtual_column(gridstore::Attribute{scope.tables[t].name, e.name});
    }
    out.columns[&e] = std::move(bc);
  }

  void column(const Expr &e, const Scope &scope, BoundQuery &out, bool allow_alias) {
    int depth = 0;
    for (const Scope *s = &scope; s; s = s->parent, ++depth) {
      if (!e.qualifier.empty()) {
        for (std::size_t t = 0; t < s->tables.size(); ++t) {
          if (s->tables[t].visible != e.qualifier) continue;
          const auto &names = s->columns[t].names;
          if (std::find(names.begin(), names.end(), e.name) == names.end()) {
            throw Error("UnknownColumn", fmt::format("{}:{}: unknown column '{}.{}'", e.span.line, e.span.column,
                                                     e.qualifier, e.name));
          }
          annotate(e, *s, t, depth, out);
          return;
        }
        continue;
      }
      std::vector<std::size_t> hits;
      for (std::size_t t = 0; t < s->tables.size(); ++t) {
        const auto &names = s->columns[t].names;
        if (std::find(names.begin(), names.end(), e.name) != names.end()) hits.push_back(t);
      }
      if (hits.size() > 1) {
        throw Error("AmbiguousColumn",
                    fmt::format("{}:{}: column '{}' is ambiguous between '{}' and '{}'", e.span.line, e.span.column,
                                e.name, s->tables[hits[0]].visible, s->tables[hits[1]].visible));
      }
      if (hits.size() == 1) {
        annotate(e, *s, hits[0], depth, out);
        return;
      }
      if (depth == 0 && allow_alias && s->projections) {
        for (std::size_t i = 0; i < s->projections->size(); ++i) {
          if ((*s->projections)[i].alias == e.name) {
            BoundColumn bc;
            bc.column = e.name;
            bc.projection = i;
            out.columns[&e] = bc;
            return;
          }
        }
      }
    }
    if (!e.qualifier.empty()) {
      throw Error("UnknownTable", fmt::format("{}:{}: unknown table or alias '{}'", e.span.line, e.span.column,
                                              e.qualifier));
    }
    throw Error("UnknownColumn", fmt::format("{}:{}: unknown column '{}'", e.span.line, e.span.column, e.name));
  }

  void expr(const ExprPtr &e, const Scope &scope, BoundQuery &out, bool allow_alias) {
    if (!e) return;
    switch (e->kind) {
      case ExprKind::Column:
        column(*e, scope, out, allow_alias);
        return;
      case ExprKind::Function:
        if (e->name == "ST_DWITHIN") {
          if (e->args.size() != 3) {
            throw Error("InvalidPredicate",
                        fmt::format("{}:{}: ST_DWithin takes three arguments", e->span.line, e->span.column));
          }
          const Expr &r = *e->args[2];
          double radius = r.literal_kind == LiteralKind::Integer ? static_cast<double>(r.integer) : r.number;
          bool numeric = r.kind == ExprKind::Literal &&
                         (r.literal_kind == LiteralKind::Integer || r.literal_kind == LiteralKind::Real);
          if (!numeric || !(radius > 0.0)) {
            throw Error("InvalidPredicate", fmt::format("{}:{}: ST_DWithin radius must be a positive number",
                                                        r.span.line, r.span.column));
          }
        } else if (e->name == "ST_INTERSECTS" && e->args.size() != 2) {
          throw Error("InvalidPredicate",
                      fmt::format("{}:{}: ST_Intersects takes two arguments", e->span.line, e->span.column));
        }
        break;
      default:
        break;
    }
    for (const auto &a : e->args) expr(a, scope, out, allow_alias);
    if (e->subquery) {
      out.subqueries.emplace(e.get(), bind_query(*e->subquery, &scope));
    }
  }

  static bool has_aggregate(const ExprPtr &e) {
    if (!e) return false;
    if (e->kind == ExprKind::Function && is_aggregate_name(e->name)) return true;
    for (const auto &a : e->args) {
      if (has_aggregate(a)) return true;
    }
    return false;
  }

  static void bare_columns(const ExprPtr &e, std::vector<const Expr *> &out) {
    if (!e) return;
    if (e->kind == ExprKind::Function && is_aggregate_name(e->name)) return;
    if (e->kind == ExprKind::Column) out.push_back(e.get());
    for (const auto &a : e->args) bare_columns(a, out);
  }

  void check_aggregates(const BoundQuery &q) {
    bool any = false;
    for (const auto &p : q.query.projections) any = any || has_aggregate(p.expr);
    if (!any && q.query.group_by.empty()) return;
    auto same = [&](const Expr *a, const Expr *b) {
      auto x = q.columns.find(a), y = q.columns.find(b);
      if (x == q.columns.end() || y == q.columns.end()) return false;
      return x->second.depth == y->second.depth && x->second.table == y->second.table &&
             x->second.column == y->second.column && !x->second.projection && !y->second.projection;
    };
    for (const auto &p : q.query.projections) {
      std::vector<const Expr *> bare;
      bare_columns(p.expr, bare);
      for (const Expr *c : bare) {
        if (q.columns.at(c).depth > 0) continue;
        bool grouped = false;
        for (const auto &g : q.query.group_by) {
          if (g->kind == ExprKind::Column && same(c, g.get())) grouped = true;
        }
        if (!grouped) {
          throw Error("InvalidAggregate",
                      fmt::format("{}:{}: column '{}' must appear in GROUP BY or inside an aggregate", c->span.line,
                                  c->span.column, c->name));
        }
      }
    }
  }

  const catalog::Catalog &catalog_;
  const gridstore::Store *store_;
};

}  // namespace

const BoundColumn *BoundQuery::column(const Expr *e) const {
  auto it = columns.find(e);
  return it == columns.end() ? nullptr : &it->second;
}

std::vector<gridstore::Attribute> BoundQuery::virtual_attributes() const {
  std::vector<gridstore::Attribute> out;
  auto add = [&](const gridstore::Attribute &a) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  };
  for (const auto &[e, c] : columns) {
    if (c.cls == ColumnClass::Virtual) add(c.def->attribute());
  }
  for (const auto &[e, sub] : subqueries) {
    for (const auto &a : sub.virtual_attributes()) add(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t BoundQuery::virtual_count() const {
  std::size_t n = 0;
  for (const auto &[e, c] : columns) n += c.cls == ColumnClass::Virtual ? 1 : 0;
  for (const auto &[e, sub] : subqueries) n += sub.virtual_count();
  return n;
}

BoundQuery bind(const SelectQuery &query, const catalog::Catalog &catalog, const gridstore::Store *store) {
  return Binder(catalog, store).bind_query(query, nullptr);
}

}  // namespace genie::qlang
