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

#include "genie/planner/requirements.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::planner {

namespace {

using qlang::BoundQuery;
using qlang::Expr;
using qlang::ExprKind;
using qlang::ExprPtr;
using qlang::LiteralKind;

void split_and(const ExprPtr &e, std::vector<ExprPtr> &out) {
  if (!e) return;
  if (e->kind == ExprKind::Binary && e->binary_op == qlang::BinaryOp::And) {
    split_and(e->args[0], out);
    split_and(e->args[1], out);
    return;
  }
  out.push_back(e);
}

std::vector<ExprPtr> conjuncts(const BoundQuery &q) {
  std::vector<ExprPtr> out;
  split_and(q.query.where, out);
  for (const auto &j : q.query.joins) split_and(j.on, out);
  return out;
}

std::optional<double> literal_number(const Expr &e) {
  if (e.kind == ExprKind::Unary && e.unary_op == qlang::UnaryOp::Neg && e.args.size() == 1) {
    auto v = literal_number(*e.args[0]);
    if (v) return -*v;
    return std::nullopt;
  }
  if (e.kind != ExprKind::Literal) return std::nullopt;
  if (e.literal_kind == LiteralKind::Integer) return static_cast<double>(e.integer);
  if (e.literal_kind == LiteralKind::Real) return e.number;
  return std::nullopt;
}

// Filters rows of one stored table with the predicates that only touch it.
// Anything it cannot decide counts as true, so the anchor set is a superset.
class RowFilter {
 public:
  RowFilter(const BoundQuery &q, std::size_t table, const gridstore::StoredTable &data)
      : q_(q), table_(table), data_(data) {
    for (const auto &c : conjuncts(q)) {
      if (local(c)) preds_.push_back(c);
    }
  }

  bool accept(const std::vector<gridstore::Value> &row) const {
    for (const auto &p : preds_) {
      if (truth(*p, row) == 0) return false;
    }
    return true;
  }

 private:
  bool local(const ExprPtr &e) const {
    if (!e) return true;
    if (e->subquery) return false;
    if (e->kind == ExprKind::Function) return false;
    if (e->kind == ExprKind::Column) {
      const auto *bc = q_.column(e.get());
      return bc && bc->depth == 0 && !bc->projection && bc->table == table_;
    }
    for (const auto &a : e->args) {
      if (!local(a)) return false;
    }
    return true;
  }

  using V = gridstore::Value;

  V value(const Expr &e, const std::vector<V> &row) const {
    if (e.kind == ExprKind::Column) {
      auto idx = data_.column_index(e.name);
      return idx ? row[*idx] : V{};
    }
    if (auto n = literal_number(e)) {
      if (e.kind == ExprKind::Literal && e.literal_kind == LiteralKind::Integer) return V{e.integer};
      return V{*n};
    }
    if (e.kind == ExprKind::Literal && e.literal_kind == LiteralKind::String) return V{e.text};
    return V{};
  }

  // -1 unknown, 0 false, 1 true
  static int compare(const V &a, const V &b, qlang::BinaryOp op) {
    int c = 0;
    auto x = gridstore::value_number(a), y = gridstore::value_number(b);
    if (x && y) {
      c = *x < *y ? -1 : (*x > *y ? 1 : 0);
    } else if (std::holds_alternative<std::string>(a) && std::holds_alternative<std::string>(b)) {
      c = std::get<std::string>(a).compare(std::get<std::string>(b));
      c = c < 0 ? -1 : (c > 0 ? 1 : 0);
    } else {
      return -1;
    }
    switch (op) {
      case qlang::BinaryOp::Eq: return c == 0;
      case qlang::BinaryOp::Ne: return c != 0;
      case qlang::BinaryOp::Lt: return c < 0;
      case qlang::BinaryOp::Le: return c <= 0;
      case qlang::BinaryOp::Gt: return c > 0;
      case qlang::BinaryOp::Ge: return c >= 0;
      default: return -1;
    }
  }

  int truth(const Expr &e, const std::vector<V> &row) const {
    switch (e.kind) {
      case ExprKind::Binary: {
        auto op = e.binary_op;
        if (op == qlang::BinaryOp::And || op == qlang::BinaryOp::Or) {
          int a = truth(*e.args[0], row), b = truth(*e.args[1], row);
          if (op == qlang::BinaryOp::And) {
            if (a == 0 || b == 0) return 0;
            return a == 1 && b == 1 ? 1 : -1;
          }
          if (a == 1 || b == 1) return 1;
          return a == 0 && b == 0 ? 0 : -1;
        }
        return compare(value(*e.args[0], row), value(*e.args[1], row), op);
      }
      case ExprKind::Unary:
        if (e.unary_op == qlang::UnaryOp::Not) {
          int a = truth(*e.args[0], row);
          return a < 0 ? -1 : 1 - a;
        }
        return -1;
      case ExprKind::Between: {
        V s = value(*e.args[0], row);
        int lo = compare(s, value(*e.args[1], row), qlang::BinaryOp::Ge);
        int hi = compare(s, value(*e.args[2], row), qlang::BinaryOp::Le);
        if (lo < 0 || hi < 0) return -1;
        int r = lo && hi;
        return e.negated ? 1 - r : r;
      }
      case ExprKind::InList: {
        V s = value(*e.args[0], row);
        bool unknown = false;
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          int c = compare(s, value(*e.args[i], row), qlang::BinaryOp::Eq);
          if (c == 1) return e.negated ? 0 : 1;
          if (c < 0) unknown = true;
        }
        if (unknown) return -1;
        return e.negated ? 1 : 0;
      }
      default:
        return -1;
    }
  }

  const BoundQuery &q_;
  std::size_t table_;
  const gridstore::StoredTable &data_;
  std::vector<ExprPtr> preds_;
};

struct Analysis {
  std::vector<BBox> boxes;
  bool restricted = false;
  std::optional<double> buffer_m;
  std::int64_t t_lo;
  std::int64_t t_hi;
};

class Analyzer {
 public:
  Analyzer(const catalog::Catalog &catalog, const gridstore::Store &store, Analysis &out)
      : catalog_(catalog), store_(store), out_(out) {}

  void query(const BoundQuery &q) {
    for (const auto &c : conjuncts(q)) {
      spatial(q, c);
      temporal(q, c);
    }
    for (const auto &[e, sub] : q.subqueries) query(sub);
  }

 private:
  const qlang::BoundColumn *column_of(const BoundQuery &q, const ExprPtr &e) const {
    if (!e || e->kind != ExprKind::Column) return nullptr;
    const auto *bc = q.column(e.get());
    if (!bc || bc->depth != 0 || bc->projection) return nullptr;
    return bc;
  }

  bool is_virtual_side(const BoundQuery &q, const ExprPtr &e) const {
    const auto *bc = column_of(q, e);
    return bc && q.tables[bc->table].has_virtual;
  }

  std::optional<qlang::TypeTag> column_type(const BoundQuery &q, const qlang::BoundColumn &bc) const {
    auto schema = catalog_.table(q.tables[bc.table].name);
    if (!schema) return std::nullopt;
    const auto *c = schema->column(bc.column);
    if (!c) return std::nullopt;
    return c->type.tag;
  }

  std::vector<std::pair<double, double>> anchors(const BoundQuery &q, const qlang::BoundColumn &bc) const {
    std::vector<std::pair<double, double>> pts;
    const auto *data = store_.table(q.tables[bc.table].name);
    if (!data) return pts;
    auto idx = data->column_index(bc.column);
    if (!idx) return pts;
    RowFilter filter(q, bc.table, *data);
    for (const auto &row : data->rows()) {
      if (!filter.accept(row)) continue;
      if (const auto *p = std::get_if<gridstore::GeoPoint>(&row[*idx])) pts.emplace_back(p->lat, p->lon);
    }
    return pts;
  }

  void add_points(const std::vector<std::pair<double, double>> &pts, double radius_m) {
    const BBox &clip = store_.domain().bbox();
    for (const auto &b : gridstore::buffer_extent(pts, std::max(radius_m, 1.0), clip)) out_.boxes.push_back(b);
    out_.restricted = true;
    out_.buffer_m = std::max(out_.buffer_m.value_or(0.0), radius_m);
  }

  void anchor_predicate(const BoundQuery &q, const ExprPtr &a, const ExprPtr &b, double radius_m) {
    const ExprPtr *other = nullptr;
    if (is_virtual_side(q, a)) other = &b;
    else if (is_virtual_side(q, b)) other = &a;
    if (!other) return;
    const ExprPtr &o = *other;
    if (o->kind == ExprKind::Function && o->name == "ST_MAKEENVELOPE" && o->args.size() >= 4) {
      std::optional<double> v[4];
      for (int k = 0; k < 4; ++k) v[k] = literal_number(*o->args[k]);
      if (!v[0] || !v[1] || !v[2] || !v[3]) return;
      BBox box{std::min(*v[1], *v[3]), std::max(*v[1], *v[3]), std::min(*v[0], *v[2]), std::max(*v[0], *v[2])};
      const BBox &d = store_.domain().bbox();
      box = BBox{std::max(box.lat_min, d.lat_min), std::min(box.lat_max, d.lat_max),
                 std::max(box.lon_min, d.lon_min), std::min(box.lon_max, d.lon_max)};
      out_.restricted = true;
      if (box.valid()) out_.boxes.push_back(box);
      return;
    }
    const auto *bc = column_of(q, o);
    if (!bc || q.tables[bc->table].has_virtual) return;
    add_points(anchors(q, *bc), radius_m);
  }

  void spatial(const BoundQuery &q, const ExprPtr &e) {
    if (e->kind != ExprKind::Function) return;
    if (e->name == "ST_DWITHIN" && e->args.size() == 3) {
      auto r = literal_number(*e->args[2]);
      if (r) anchor_predicate(q, e->args[0], e->args[1], *r);
    } else if ((e->name == "ST_INTERSECTS" || e->name == "ST_WITHIN" || e->name == "ST_CONTAINS") &&
               e->args.size() == 2) {
      anchor_predicate(q, e->args[0], e->args[1], 0.0);
    }
  }

  std::optional<std::int64_t> time_literal(const Expr &e) const {
    if (e.kind != ExprKind::Literal || e.literal_kind != LiteralKind::String) return std::nullopt;
    return gridstore::parse_timestamp(e.text);
  }

  bool is_time_column(const BoundQuery &q, const ExprPtr &e) const {
    const auto *bc = column_of(q, e);
    if (!bc || !q.tables[bc->table].has_virtual) return false;
    return column_type(q, *bc) == qlang::TypeTag::Timestamp;
  }

  void temporal(const BoundQuery &q, const ExprPtr &e) {
    if (e->kind == ExprKind::Between && !e->negated && is_time_column(q, e->args[0])) {
      auto lo = time_literal(*e->args[1]), hi = time_literal(*e->args[2]);
      if (lo) out_.t_lo = std::max(out_.t_lo, *lo);
      if (hi) out_.t_hi = std::min(out_.t_hi, *hi);
      return;
    }
    if (e->kind != ExprKind::Binary) return;
    auto op = e->binary_op;
    ExprPtr col = e->args[0], lit = e->args[1];
    if (!is_time_column(q, col)) {
      std::swap(col, lit);
      if (!is_time_column(q, col)) return;
      switch (op) {
        case qlang::BinaryOp::Lt: op = qlang::BinaryOp::Gt; break;
        case qlang::BinaryOp::Le: op = qlang::BinaryOp::Ge; break;
        case qlang::BinaryOp::Gt: op = qlang::BinaryOp::Lt; break;
        case qlang::BinaryOp::Ge: op = qlang::BinaryOp::Le; break;
        default: break;
      }
    }
    auto t = time_literal(*lit);
    if (!t) return;
    switch (op) {
      case qlang::BinaryOp::Eq:
        out_.t_lo = std::max(out_.t_lo, *t);
        out_.t_hi = std::min(out_.t_hi, *t);
        break;
      case qlang::BinaryOp::Gt:
      case qlang::BinaryOp::Ge: out_.t_lo = std::max(out_.t_lo, *t); break;
      case qlang::BinaryOp::Lt: out_.t_hi = std::min(out_.t_hi, *t - 1); break;
      case qlang::BinaryOp::Le: out_.t_hi = std::min(out_.t_hi, *t); break;
      default: break;
    }
  }

  const catalog::Catalog &catalog_;
  const gridstore::Store &store_;
  Analysis &out_;
};

bool has_aggregate(const ExprPtr &e) {
  if (!e) return false;
  if (e->kind == ExprKind::Function && qlang::is_aggregate_name(e->name)) return true;
  for (const auto &a : e->args) {
    if (has_aggregate(a)) return true;
  }
  return false;
}

}  // namespace

const char *class_name(AccuracyClass c) {
  switch (c) {
    case AccuracyClass::Overview: return "overview";
    case AccuracyClass::Regional: return "regional";
    case AccuracyClass::Point: return "point";
  }
  return "?";
}

double AccuracyFloors::of(AccuracyClass c) const {
  switch (c) {
    case AccuracyClass::Overview: return overview;
    case AccuracyClass::Regional: return regional;
    case AccuracyClass::Point: return point;
  }
  return regional;
}

std::optional<double> RequirementSpec::hint(const std::string &key) const {
  auto it = hints.find(key);
  if (it == hints.end()) return std::nullopt;
  return it->second;
}

std::optional<double> RequirementSpec::hint(const std::string &simulator, const std::string &key) const {
  if (auto v = hint(simulator + "." + key)) return v;
  return hint(key);
}

void collect_hints(const qlang::HintClause &hint, std::map<std::string, double> &numbers,
                   std::map<std::string, std::string> &texts) {
  std::map<std::string, std::string> seen;
  for (const auto &h : hint.entries) {
    std::string key;
    for (char c : h.key) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::string shown = h.value.normalized ? fmt::format("{}", *h.value.normalized) : h.value.text;
    auto [it, fresh] = seen.emplace(key, shown);
    if (!fresh) {
      if (it->second != shown) {
        throw Error("ConflictingHints", fmt::format("{}:{}: hint '{}' is given as both {} and {}", h.span.line,
                                                    h.span.column, key, it->second, shown));
      }
      continue;
    }
    if (h.value.normalized) numbers[key] = *h.value.normalized;
    else texts[key] = h.value.text;
  }
}

RequirementSpec extract_requirements(const qlang::BoundQuery &bound, const catalog::Catalog &catalog,
                                     const gridstore::Store &store, const AccuracyFloors &floors) {
  const auto &domain = store.domain();
  RequirementSpec req;
  req.attributes = bound.virtual_attributes();
  if (bound.query.hint) collect_hints(*bound.query.hint, req.hints, req.text_hints);

  Analysis a;
  a.t_lo = domain.interval().start;
  a.t_hi = domain.interval().end;
  Analyzer(catalog, store, a).query(bound);

  if (a.restricted) {
    req.extent = gridstore::union_boxes(a.boxes);
  } else {
    req.extent = {domain.bbox()};
    req.full_domain = true;
  }
  req.interval = TimeInterval{a.t_lo, a.t_hi};
  req.buffer_m = a.buffer_m;

  for (const auto &p : bound.query.projections) req.aggregates = req.aggregates || has_aggregate(p.expr);
  req.aggregates = req.aggregates || has_aggregate(bound.query.having);

  double frac = 0.0;
  if (!req.extent.empty() && domain.bbox().area() > 0.0) {
    BBox hull = req.extent.front();
    for (const auto &b : req.extent) {
      hull.lat_min = std::min(hull.lat_min, b.lat_min);
      hull.lat_max = std::max(hull.lat_max, b.lat_max);
      hull.lon_min = std::min(hull.lon_min, b.lon_min);
      hull.lon_max = std::max(hull.lon_max, b.lon_max);
    }
    frac = hull.area() / domain.bbox().area();
  }
  if (req.aggregates && frac > kOverviewAreaFraction) {
    req.accuracy_class = AccuracyClass::Overview;
  } else if (req.buffer_m && *req.buffer_m <= kPointBufferM) {
    req.accuracy_class = AccuracyClass::Point;
  } else {
    req.accuracy_class = AccuracyClass::Regional;
  }
  req.accuracy_floor = floors.of(req.accuracy_class);
  if (auto q = req.hint("q_required")) req.accuracy_floor = *q;
  else if (auto q2 = req.hint("accuracy")) req.accuracy_floor = *q2;
  return req;
}

}  // namespace genie::planner
