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

#include "genie/engine/evaluator.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <unordered_map>

#include <fmt/format.h>

#include "genie/error.h"
#include "genie/qlang/render.h"

namespace genie::engine {

namespace {

using qlang::BinaryOp;
using qlang::BoundQuery;
using qlang::Expr;
using qlang::ExprKind;
using qlang::ExprPtr;
using qlang::LiteralKind;
using qlang::TypeTag;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void type_error(const Expr &e, const std::string &what) {
  throw Error("TypeMismatch", fmt::format("{}:{}: {}", e.span.line, e.span.column, what));
}

std::optional<std::int64_t> as_time(const Datum &d) {
  if (const auto *t = std::get_if<Timestamp>(&d)) return t->t;
  if (const auto *s = std::get_if<std::string>(&d)) {
    try {
      return gridstore::parse_timestamp(*s);
    } catch (const Error &) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// nullopt for NULL operands; throws for incomparable kinds
std::optional<int> compare(const Datum &a, const Datum &b, const Expr &where) {
  if (is_null(a) || is_null(b)) return std::nullopt;
  auto sign = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
  if (std::holds_alternative<Timestamp>(a) || std::holds_alternative<Timestamp>(b)) {
    auto x = as_time(a), y = as_time(b);
    if (!x || !y) type_error(where, "cannot compare a timestamp with " + datum_text(x ? b : a));
    return sign(*x, *y);
  }
  auto x = datum_number(a), y = datum_number(b);
  if (x && y) return sign(*x, *y);
  if (std::holds_alternative<std::string>(a) && std::holds_alternative<std::string>(b)) {
    int c = std::get<std::string>(a).compare(std::get<std::string>(b));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  if (a == b) return 0;
  type_error(where, fmt::format("cannot compare {} with {}", datum_text(a), datum_text(b)));
}

// Three-valued truth: nullopt is unknown.
std::optional<bool> truth(const Datum &d) {
  if (is_null(d)) return std::nullopt;
  if (const auto *b = std::get_if<bool>(&d)) return *b;
  if (auto n = datum_number(d)) return *n != 0.0;
  return true;
}

std::string datum_key(const Datum &d) {
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "n";
        else if constexpr (std::is_same_v<T, bool>) return v ? "b1" : "b0";
        else if constexpr (std::is_same_v<T, std::int64_t>) return fmt::format("i{}", v);
        else if constexpr (std::is_same_v<T, double>) return fmt::format("d{}", v);
        else if constexpr (std::is_same_v<T, std::string>) return "s" + v;
        else if constexpr (std::is_same_v<T, GeoPoint>) return fmt::format("p{},{}", v.lat, v.lon);
        else if constexpr (std::is_same_v<T, BBox>)
          return fmt::format("x{},{},{},{}", v.lat_min, v.lat_max, v.lon_min, v.lon_max);
        else return fmt::format("t{}", v.t);
      },
      d);
}

// numeric equality keys: 3 and 3.0 must meet in hash joins
std::string join_key(const Datum &d) {
  if (auto n = datum_number(d); n && !std::holds_alternative<bool>(d)) return fmt::format("d{}", *n);
  return datum_key(d);
}

struct Geo {
  bool point = true;
  BBox box;  // degenerate for points
};

std::optional<Geo> as_geo(const Datum &d) {
  if (const auto *p = std::get_if<GeoPoint>(&d)) return Geo{true, BBox{p->lat, p->lat, p->lon, p->lon}};
  if (const auto *b = std::get_if<BBox>(&d)) return Geo{false, *b};
  return std::nullopt;
}

double geo_distance(const Geo &a, const Geo &b) {
  if (a.point && b.point) return gridstore::point_distance_m(a.box.lat_min, a.box.lon_min, b.box.lat_min, b.box.lon_min);
  if (a.point) return gridstore::point_box_distance_m(a.box.lat_min, a.box.lon_min, b.box);
  if (b.point) return gridstore::point_box_distance_m(b.box.lat_min, b.box.lon_min, a.box);
  double dlat = std::max({a.box.lat_min - b.box.lat_max, 0.0, b.box.lat_min - a.box.lat_max});
  double dlon = std::max({a.box.lon_min - b.box.lon_max, 0.0, b.box.lon_min - a.box.lon_max});
  double lat = 0.25 * (a.box.lat_min + a.box.lat_max + b.box.lat_min + b.box.lat_max);
  double dy = dlat * gridstore::kMetersPerDegree;
  double dx = dlon * gridstore::kMetersPerDegree * std::cos(lat * M_PI / 180.0);
  return std::sqrt(dx * dx + dy * dy);
}

// ---------------------------------------------------------------- tables

enum class SlotKind { Stored, Grid, Mixed, Empty };
enum class ColKind { Stored, GridGeom, GridTime, GridValue, GridRef, MixedValue, Null };

struct ColAcc {
  ColKind kind = ColKind::Null;
  TypeTag type = TypeTag::Real;
  std::size_t stored = 0;
  const gridstore::GridField *field = nullptr;
  // nearest-source attribution for REFERENCES columns of grid tables
  const gridstore::StoredTable *ref = nullptr;
  std::size_t ref_key = 0;
  std::size_t ref_geom = 0;
  std::optional<std::size_t> ref_time;
};

struct Slot {
  SlotKind kind = SlotKind::Empty;
  std::string name;
  const gridstore::StoredTable *stored = nullptr;
  const gridstore::GridField *grid = nullptr;
  const gridstore::Domain *domain = nullptr;
  std::vector<std::string> names;
  std::vector<ColAcc> cols;
  std::optional<std::size_t> geom;
  std::size_t nrows = 0;
  int ni = 0, nj = 0, nt = 0;
  std::vector<long> row_cell;  // mixed: flat (i, j) cell of each stored row, -1 outside

  std::optional<std::size_t> column(const std::string &n) const {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (names[c] == n) return c;
    }
    return std::nullopt;
  }

  Datum stored_value(const gridstore::Value &v, TypeTag type) const {
    return std::visit(
        [&](const auto &x) -> Datum {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, std::monostate>) return Datum{};
          else if constexpr (std::is_same_v<T, std::int64_t>) {
            if (type == TypeTag::Timestamp) return Timestamp{x};
            if (type == TypeTag::Boolean) return x != 0;
            return x;
          } else {
            return x;
          }
        },
        v);
  }

  Datum get(std::size_t c, std::uint64_t row) const {
    const ColAcc &a = cols[c];
    switch (kind) {
      case SlotKind::Stored:
        return a.kind == ColKind::Stored ? stored_value(stored->row(row)[a.stored], a.type) : Datum{};
      case SlotKind::Mixed: {
        std::uint64_t r = row / nt;
        int t = static_cast<int>(row % nt);
        if (a.kind == ColKind::Stored) return stored_value(stored->row(r)[a.stored], a.type);
        if (a.kind == ColKind::MixedValue) {
          long cell = row_cell[r];
          if (cell < 0) return Datum{};
          double v = a.field->values[static_cast<std::size_t>(t) * ni * nj + cell];
          return std::isnan(v) ? Datum{} : Datum{v};
        }
        return Datum{};
      }
      case SlotKind::Grid: {
        int j = static_cast<int>(row % nj);
        int i = static_cast<int>((row / nj) % ni);
        int t = static_cast<int>(row / (static_cast<std::uint64_t>(ni) * nj));
        switch (a.kind) {
          case ColKind::GridGeom: return domain->to_bbox(grid->cell_rect(i, j));
          case ColKind::GridTime: return Timestamp{domain->abs(grid->step_start(t))};
          case ColKind::GridValue: {
            double v = a.field->values[row];
            return std::isnan(v) ? Datum{} : Datum{v};
          }
          case ColKind::GridRef: return attribution(a, i, j, t);
          default: return Datum{};
        }
      }
      case SlotKind::Empty: return Datum{};
    }
    return Datum{};
  }

  Datum attribution(const ColAcc &a, int i, int j, int t) const {
    auto r = grid->cell_rect(i, j);
    double lat = domain->lat_at(0.5 * (r.i0 + r.i1)), lon = domain->lon_at(0.5 * (r.j0 + r.j1));
    std::int64_t when = domain->abs(grid->step_end(t));
    double best = std::numeric_limits<double>::infinity();
    Datum out;
    for (const auto &row : a.ref->rows()) {
      const auto *p = std::get_if<GeoPoint>(&row[a.ref_geom]);
      if (!p) continue;
      if (a.ref_time) {
        const auto *start = std::get_if<std::int64_t>(&row[*a.ref_time]);
        if (start && *start > when) continue;
      }
      double d = gridstore::point_distance_m(lat, lon, p->lat, p->lon);
      if (d < best) {
        best = d;
        out = stored_value(row[a.ref_key], TypeTag::Integer);
      }
    }
    return out;
  }
};

Slot make_slot(const std::string &name, const DataSource &data) {
  Slot s;
  s.name = name;
  s.domain = &data.store.domain();
  s.stored = data.store.table(name);
  auto schema = data.catalog.table(name);
  auto git = data.grids.find(name);
  const GridTable *gt = git == data.grids.end() ? nullptr : &git->second;
  bool has_rows = s.stored && s.stored->row_count() > 0;

  if (schema) {
    bool any_virtual = false;
    for (const auto &c : schema->columns) any_virtual = any_virtual || c.is_virtual;
    if (!any_virtual) s.kind = SlotKind::Stored;
    else if (gt && gt->grid) s.kind = has_rows ? SlotKind::Mixed : SlotKind::Grid;
    else s.kind = has_rows ? SlotKind::Stored : SlotKind::Empty;
    for (const auto &c : schema->columns) {
      ColAcc a;
      a.type = c.type.tag;
      if (s.kind == SlotKind::Stored || (s.kind == SlotKind::Mixed && !c.is_virtual)) {
        if (s.stored) {
          if (auto idx = s.stored->column_index(c.name)) {
            a.kind = ColKind::Stored;
            a.stored = *idx;
          }
        }
      } else if (c.is_virtual && gt) {
        auto f = gt->columns.find(c.name);
        if (f != gt->columns.end() && f->second) {
          a.kind = s.kind == SlotKind::Mixed ? ColKind::MixedValue : ColKind::GridValue;
          a.field = f->second;
        }
      } else if (s.kind == SlotKind::Grid) {
        if (c.type.tag == TypeTag::Geometry && !s.geom) {
          a.kind = ColKind::GridGeom;
          s.geom = s.cols.size();
        } else if (c.type.tag == TypeTag::Timestamp) {
          a.kind = ColKind::GridTime;
        } else if (c.references) {
          const auto *ref = data.store.table(c.references->first);
          if (ref && ref->geometry_column()) {
            if (auto key = ref->column_index(c.references->second)) {
              a.kind = ColKind::GridRef;
              a.ref = ref;
              a.ref_key = *key;
              a.ref_geom = *ref->geometry_column();
              for (std::size_t k = 0; k < ref->columns().size(); ++k) {
                if (ref->columns()[k].type.tag == TypeTag::Timestamp) {
                  a.ref_time = k;
                  break;
                }
              }
            }
          }
        }
      }
      if (s.kind != SlotKind::Grid && c.type.tag == TypeTag::Geometry && !s.geom && a.kind == ColKind::Stored) {
        s.geom = s.cols.size();
      }
      s.names.push_back(c.name);
      s.cols.push_back(a);
    }
  } else if (s.stored) {
    s.kind = SlotKind::Stored;
    for (std::size_t k = 0; k < s.stored->columns().size(); ++k) {
      const auto &c = s.stored->columns()[k];
      ColAcc a;
      a.kind = ColKind::Stored;
      a.type = c.type.tag;
      a.stored = k;
      if (c.type.tag == TypeTag::Geometry && !s.geom) s.geom = k;
      s.names.push_back(c.name);
      s.cols.push_back(a);
    }
  }

  switch (s.kind) {
    case SlotKind::Stored: s.nrows = s.stored ? s.stored->row_count() : 0; break;
    case SlotKind::Grid:
      s.grid = gt->grid;
      s.ni = s.grid->ni();
      s.nj = s.grid->nj();
      s.nt = s.grid->nt();
      s.nrows = s.grid->cell_count();
      break;
    case SlotKind::Mixed: {
      s.grid = gt->grid;
      s.ni = s.grid->ni();
      s.nj = s.grid->nj();
      s.nt = s.grid->nt();
      s.nrows = s.stored->row_count() * s.nt;
      auto gcol = s.stored->geometry_column();
      const auto &rect = s.grid->extent.rect;
      for (const auto &row : s.stored->rows()) {
        long cell = -1;
        const GeoPoint *p = gcol ? std::get_if<GeoPoint>(&row[*gcol]) : nullptr;
        if (p) {
          int qi = static_cast<int>(std::floor(s.domain->i_at(p->lat)));
          int qj = static_cast<int>(std::floor(s.domain->j_at(p->lon)));
          if (qi >= rect.i0 && qi < rect.i1 && qj >= rect.j0 && qj < rect.j1) {
            cell = static_cast<long>((qi - rect.i0) / s.grid->sres) * s.nj + (qj - rect.j0) / s.grid->sres;
          }
        }
        s.row_cell.push_back(cell);
      }
      break;
    }
    case SlotKind::Empty: s.nrows = 0; break;
  }
  return s;
}

// ------------------------------------------------------------ evaluation

struct Resolved {
  int depth = 0;
  std::size_t slot = 0;
  std::size_t col = 0;
  std::optional<std::size_t> projection;
};

struct Acc {
  std::int64_t count = 0;
  double sum = 0.0;
  Datum min, max;
};

struct Group {
  std::vector<std::uint64_t> tuple;
  std::vector<Acc> accs;
};

struct Scope;

struct Frame {
  const Scope *scope = nullptr;
  const std::vector<std::uint64_t> *tuple = nullptr;
  const Frame *parent = nullptr;
  const Group *group = nullptr;
};

enum class Strategy { Scan, Near, Hash };

struct LevelPlan {
  std::vector<ExprPtr> conjuncts;
  Strategy strategy = Strategy::Scan;
  ExprPtr probe;       // expression over earlier slots
  double radius = 0.0; // Near
  std::size_t hash_col = 0;
  // grid restriction
  int i0 = 0, i1 = 0, j0 = 0, j1 = 0, t0 = 0, t1 = 0;
  mutable std::optional<std::unordered_map<std::string, std::vector<std::uint64_t>>> index;
};

struct Scope {
  const BoundQuery *q = nullptr;
  std::vector<Slot> slots;
  std::map<const Expr *, Resolved> cols;
  std::vector<LevelPlan> levels;
  std::vector<ExprPtr> constant;  // conjuncts without column references
  std::map<const Expr *, std::size_t> agg_index;
  bool aggregate = false;
};

class Evaluator {
 public:
  explicit Evaluator(const DataSource &data) : data_(data) {}

  ResultSet run(const BoundQuery &q, const Frame *parent) {
    auto scope = prepare(q);
    return execute(*scope, parent);
  }

 private:
  // --- preparation

  std::unique_ptr<Scope> prepare(const BoundQuery &q) {
    auto s = std::make_unique<Scope>();
    s->q = &q;
    for (const auto &t : q.tables) s->slots.push_back(make_slot(t.name, data_));
    for (const auto &[e, bc] : q.columns) {
      Resolved r;
      r.depth = bc.depth;
      r.slot = bc.table;
      r.projection = bc.projection;
      if (!bc.projection && bc.depth == 0) {
        auto c = s->slots[bc.table].column(bc.column);
        if (!c) throw Error("UnknownColumn", fmt::format("column '{}' has no data", bc.column));
        r.col = *c;
      } else if (!bc.projection) {
        r.col = std::numeric_limits<std::size_t>::max();  // resolved against the parent scope by name
      }
      s->cols[e] = r;
    }

    std::vector<ExprPtr> conj;
    split(q.query.where, conj);
    for (const auto &j : q.query.joins) split(j.on, conj);
    s->levels.resize(s->slots.size());
    for (auto &c : conj) {
      long top = max_slot(*s, c, q);
      if (top < 0) s->constant.push_back(c);
      else s->levels[top].conjuncts.push_back(c);
    }
    for (std::size_t k = 0; k < s->levels.size(); ++k) plan_level(*s, k);

    for (const auto &p : q.query.projections) collect_aggs(*s, p.expr);
    collect_aggs(*s, q.query.having);
    s->aggregate = !s->agg_index.empty() || !q.query.group_by.empty();
    return s;
  }

  static void split(const ExprPtr &e, std::vector<ExprPtr> &out) {
    if (!e) return;
    if (e->kind == ExprKind::Binary && e->binary_op == BinaryOp::And) {
      split(e->args[0], out);
      split(e->args[1], out);
      return;
    }
    out.push_back(e);
  }

  // Highest slot of this scope an expression needs, -1 for none. Correlated
  // references from nested subqueries count at their nesting depth.
  long max_slot(const Scope &s, const ExprPtr &e, const BoundQuery &q, int level = 0) const {
    if (!e) return -1;
    long top = -1;
    if (e->kind == ExprKind::Column) {
      const auto *bc = q.column(e.get());
      if (bc && bc->depth == level) {
        if (bc->projection) top = static_cast<long>(s.slots.size()) - 1;
        else top = static_cast<long>(bc->table);
      }
    }
    for (const auto &a : e->args) top = std::max(top, max_slot(s, a, q, level));
    if (e->subquery) {
      auto it = q.subqueries.find(e.get());
      if (it != q.subqueries.end()) top = std::max(top, sub_slot(s, it->second, level + 1));
    }
    return top;
  }

  long sub_slot(const Scope &s, const BoundQuery &sub, int level) const {
    long top = -1;
    auto visit = [&](const ExprPtr &x) { top = std::max(top, max_slot(s, x, sub, level)); };
    for (const auto &p : sub.query.projections) visit(p.expr);
    for (const auto &j : sub.query.joins) visit(j.on);
    visit(sub.query.where);
    for (const auto &g : sub.query.group_by) visit(g);
    visit(sub.query.having);
    return top;
  }

  bool is_column_of(const Scope &s, const ExprPtr &e, std::size_t slot) const {
    if (!e || e->kind != ExprKind::Column) return false;
    auto it = s.cols.find(e.get());
    return it != s.cols.end() && it->second.depth == 0 && !it->second.projection && it->second.slot == slot;
  }

  static std::optional<double> literal_number(const Expr &e) {
    if (e.kind == ExprKind::Unary && e.unary_op == qlang::UnaryOp::Neg && e.args.size() == 1) {
      auto v = literal_number(*e.args[0]);
      return v ? std::optional<double>(-*v) : std::nullopt;
    }
    if (e.kind != ExprKind::Literal) return std::nullopt;
    if (e.literal_kind == LiteralKind::Integer) return static_cast<double>(e.integer);
    if (e.literal_kind == LiteralKind::Real) return e.number;
    return std::nullopt;
  }

  static std::optional<std::int64_t> literal_time(const Expr &e) {
    if (e.kind != ExprKind::Literal || e.literal_kind != LiteralKind::String) return std::nullopt;
    try {
      return gridstore::parse_timestamp(e.text);
    } catch (const Error &) {
      return std::nullopt;
    }
  }

  void plan_level(Scope &s, std::size_t k) {
    LevelPlan &lp = s.levels[k];
    const Slot &slot = s.slots[k];
    if (slot.kind == SlotKind::Grid) {
      lp.i0 = 0;
      lp.i1 = slot.ni;
      lp.j0 = 0;
      lp.j1 = slot.nj;
      lp.t0 = 0;
      lp.t1 = slot.nt;
      for (const auto &c : lp.conjuncts) restrict_grid(s, k, c);
    }
    if (k == 0) return;
    for (const auto &c : lp.conjuncts) {
      if (c->kind == ExprKind::Function && slot.kind == SlotKind::Grid && slot.geom &&
          ((c->name == "ST_DWITHIN" && c->args.size() == 3) || (c->name == "ST_INTERSECTS" && c->args.size() == 2))) {
        double r = 0.0;
        if (c->name == "ST_DWITHIN") {
          auto v = literal_number(*c->args[2]);
          if (!v) continue;
          r = *v;
        }
        for (int side = 0; side < 2; ++side) {
          const auto &mine = c->args[side], &other = c->args[1 - side];
          if (is_column_of(s, mine, k) && s.cols.at(mine.get()).col == *slot.geom &&
              max_slot(s, other, *s.q) < static_cast<long>(k) && !other->subquery) {
            lp.strategy = Strategy::Near;
            lp.probe = other;
            lp.radius = r;
            return;
          }
        }
      }
    }
    for (const auto &c : lp.conjuncts) {
      if (c->kind != ExprKind::Binary || c->binary_op != BinaryOp::Eq) continue;
      for (int side = 0; side < 2; ++side) {
        const auto &mine = c->args[side], &other = c->args[1 - side];
        if (is_column_of(s, mine, k) && max_slot(s, other, *s.q) < static_cast<long>(k)) {
          lp.strategy = Strategy::Hash;
          lp.probe = other;
          lp.hash_col = s.cols.at(mine.get()).col;
          return;
        }
      }
    }
  }

  void restrict_grid(Scope &s, std::size_t k, const ExprPtr &c) {
    LevelPlan &lp = s.levels[k];
    const Slot &slot = s.slots[k];
    auto is_time = [&](const ExprPtr &e) {
      return is_column_of(s, e, k) && slot.cols[s.cols.at(e.get()).col].kind == ColKind::GridTime;
    };
    auto is_geom = [&](const ExprPtr &e) { return is_column_of(s, e, k) && s.cols.at(e.get()).col == *slot.geom; };
    auto steps_from = [&](std::int64_t abs_lo, std::int64_t abs_hi) {
      // steps whose start lies in [abs_lo, abs_hi]
      std::int64_t lo = slot.domain->rel(abs_lo) - slot.grid->extent.t0;
      std::int64_t hi = slot.domain->rel(abs_hi) - slot.grid->extent.t0;
      std::int64_t a = lo <= 0 ? 0 : (lo + slot.grid->tres - 1) / slot.grid->tres;
      std::int64_t b = hi < 0 ? -1 : hi / slot.grid->tres;
      lp.t0 = std::max<int>(lp.t0, static_cast<int>(std::min<std::int64_t>(a, slot.nt)));
      lp.t1 = std::min<int>(lp.t1, static_cast<int>(std::max<std::int64_t>(b + 1, 0)));
    };
    const std::int64_t far = std::int64_t{1} << 50;
    if (c->kind == ExprKind::Between && !c->negated && is_time(c->args[0])) {
      auto lo = literal_time(*c->args[1]), hi = literal_time(*c->args[2]);
      steps_from(lo.value_or(-far), hi.value_or(far));
      return;
    }
    if (c->kind == ExprKind::Binary && c->args.size() == 2) {
      auto op = c->binary_op;
      ExprPtr col = c->args[0], lit = c->args[1];
      if (!is_time(col)) {
        std::swap(col, lit);
        if (!is_time(col)) goto spatial;
        if (op == BinaryOp::Lt) op = BinaryOp::Gt;
        else if (op == BinaryOp::Le) op = BinaryOp::Ge;
        else if (op == BinaryOp::Gt) op = BinaryOp::Lt;
        else if (op == BinaryOp::Ge) op = BinaryOp::Le;
      }
      if (auto t = literal_time(*lit)) {
        if (op == BinaryOp::Eq) steps_from(*t, *t);
        else if (op == BinaryOp::Ge || op == BinaryOp::Gt) steps_from(*t, far);
        else if (op == BinaryOp::Le || op == BinaryOp::Lt) steps_from(-far, *t);
      }
      return;
    }
  spatial:
    if (c->kind == ExprKind::Function && c->name == "ST_INTERSECTS" && c->args.size() == 2 && slot.geom) {
      for (int side = 0; side < 2; ++side) {
        const auto &mine = c->args[side], &other = c->args[1 - side];
        if (!is_geom(mine) || other->kind != ExprKind::Function || other->name != "ST_MAKEENVELOPE" ||
            other->args.size() < 4) {
          continue;
        }
        std::optional<double> v[4];
        for (int q = 0; q < 4; ++q) v[q] = literal_number(*other->args[q]);
        if (!v[0] || !v[1] || !v[2] || !v[3]) continue;
        BBox b{std::min(*v[1], *v[3]), std::max(*v[1], *v[3]), std::min(*v[0], *v[2]), std::max(*v[0], *v[2])};
        auto [i0, i1, j0, j1] = cell_range(slot, b);
        lp.i0 = std::max(lp.i0, i0);
        lp.i1 = std::min(lp.i1, i1);
        lp.j0 = std::max(lp.j0, j0);
        lp.j1 = std::min(lp.j1, j1);
      }
    }
  }

  // grid cells whose closed boxes may touch `b` (a superset)
  static std::array<int, 4> cell_range(const Slot &slot, const BBox &b) {
    const auto &rect = slot.grid->extent.rect;
    const int s = slot.grid->sres;
    auto idx = [&](double q, int origin, int n) {
      long v = static_cast<long>(std::floor((q - origin) / s));
      return static_cast<int>(std::clamp<long>(v, 0, n));
    };
    int i0 = idx(slot.domain->i_at(b.lat_min) - 1e-6, rect.i0, slot.ni);
    int i1 = idx(slot.domain->i_at(b.lat_max) + 1e-6, rect.i0, slot.ni - 1) + 1;
    int j0 = idx(slot.domain->j_at(b.lon_min) - 1e-6, rect.j0, slot.nj);
    int j1 = idx(slot.domain->j_at(b.lon_max) + 1e-6, rect.j0, slot.nj - 1) + 1;
    if (slot.domain->i_at(b.lat_max) < rect.i0 || slot.domain->j_at(b.lon_max) < rect.j0) return {0, 0, 0, 0};
    return {i0, i1, j0, j1};
  }

  void collect_aggs(Scope &s, const ExprPtr &e) {
    if (!e) return;
    if (e->kind == ExprKind::Function && qlang::is_aggregate_name(e->name)) {
      s.agg_index.emplace(e.get(), s.agg_index.size());
      return;
    }
    for (const auto &a : e->args) collect_aggs(s, a);
  }

  // --- execution

  ResultSet execute(const Scope &s, const Frame *parent) {
    ResultSet out;
    const auto &q = s.q->query;
    std::vector<std::pair<ExprPtr, std::string>> proj;
    for (const auto &p : q.projections) {
      if (p.expr->kind == ExprKind::Star) {
        for (std::size_t k = 0; k < s.slots.size(); ++k) {
          if (!p.expr->qualifier.empty() && s.q->tables[k].visible != p.expr->qualifier) continue;
          for (std::size_t c = 0; c < s.slots[k].names.size(); ++c) {
            out.columns.push_back(s.slots[k].names[c]);
            star_.push_back({k, c});
          }
        }
        proj.emplace_back(p.expr, "*");
        continue;
      }
      std::string name = p.alias ? *p.alias : (p.expr->kind == ExprKind::Column ? p.expr->name : qlang::render(*p.expr));
      out.columns.push_back(name);
      proj.emplace_back(p.expr, name);
    }

    Frame root{&s, nullptr, parent, nullptr};
    for (const auto &c : s.constant) {
      if (truth(eval(*c, root)) != true) return out;
    }
    if (s.slots.empty()) {
      std::vector<std::uint64_t> none;
      Frame f{&s, &none, parent, nullptr};
      emit_row(s, f, out);
      return out;
    }

    std::vector<Group> groups;
    std::unordered_map<std::string, std::size_t> group_of;
    std::vector<std::uint64_t> tuple(s.slots.size(), 0);

    std::function<void(const Frame &)> sink;
    if (s.aggregate) {
      sink = [&](const Frame &f) {
        std::string key;
        for (const auto &g : q.group_by) key += datum_key(eval(*g, f)) + "|";
        auto [it, fresh] = group_of.emplace(key, groups.size());
        if (fresh) groups.push_back(Group{*f.tuple, std::vector<Acc>(s.agg_index.size())});
        Group &g = groups[it->second];
        for (const auto &[e, idx] : s.agg_index) accumulate(*e, f, g.accs[idx]);
      };
    } else {
      sink = [&](const Frame &f) { emit_row(s, f, out); };
    }
    walk(s, 0, tuple, parent, sink);

    if (s.aggregate) {
      if (groups.empty() && q.group_by.empty()) groups.push_back(Group{tuple, std::vector<Acc>(s.agg_index.size())});
      for (const auto &g : groups) {
        Frame f{&s, &g.tuple, parent, &g};
        if (q.having && truth(eval(*q.having, f)) != true) continue;
        emit_row(s, f, out);
      }
    }
    return out;
  }

  void emit_row(const Scope &s, const Frame &f, ResultSet &out) {
    std::vector<Datum> row;
    std::size_t star_pos = 0;
    for (const auto &p : s.q->query.projections) {
      if (p.expr->kind == ExprKind::Star) {
        for (std::size_t k = 0; k < s.slots.size(); ++k) {
          if (!p.expr->qualifier.empty() && s.q->tables[k].visible != p.expr->qualifier) continue;
          for (std::size_t c = 0; c < s.slots[k].names.size(); ++c, ++star_pos) {
            row.push_back(s.slots[k].get(c, (*f.tuple)[k]));
          }
        }
        continue;
      }
      row.push_back(eval(*p.expr, f));
    }
    out.rows.push_back(std::move(row));
  }

  void walk(const Scope &s, std::size_t k, std::vector<std::uint64_t> &tuple, const Frame *parent,
            const std::function<void(const Frame &)> &sink) {
    const LevelPlan &lp = s.levels[k];
    const Slot &slot = s.slots[k];
    Frame f{&s, &tuple, parent, nullptr};
    auto visit = [&](std::uint64_t id) {
      tuple[k] = id;
      for (const auto &c : lp.conjuncts) {
        if (truth(eval(*c, f)) != true) return;
      }
      if (k + 1 == s.slots.size()) sink(f);
      else walk(s, k + 1, tuple, parent, sink);
    };

    if (slot.kind == SlotKind::Grid && lp.strategy != Strategy::Hash) {
      int i0 = lp.i0, i1 = lp.i1, j0 = lp.j0, j1 = lp.j1;
      if (lp.strategy == Strategy::Near) {
        auto g = as_geo(eval(*lp.probe, f));
        if (!g) return;
        double m = lp.radius / gridstore::kMetersPerDegree;
        double lat = 0.5 * (g->box.lat_min + g->box.lat_max);
        double mlon = m / std::max(0.01, std::cos(lat * M_PI / 180.0));
        BBox b{g->box.lat_min - m, g->box.lat_max + m, g->box.lon_min - mlon, g->box.lon_max + mlon};
        auto r = cell_range(slot, b);
        i0 = std::max(i0, r[0]);
        i1 = std::min(i1, r[1]);
        j0 = std::max(j0, r[2]);
        j1 = std::min(j1, r[3]);
      }
      for (int t = lp.t0; t < lp.t1; ++t) {
        for (int i = i0; i < i1; ++i) {
          for (int j = j0; j < j1; ++j) {
            visit((static_cast<std::uint64_t>(t) * slot.ni + i) * slot.nj + j);
          }
        }
      }
      return;
    }
    if (lp.strategy == Strategy::Hash) {
      if (!lp.index) {
        lp.index.emplace();
        for (std::uint64_t r = 0; r < slot.nrows; ++r) {
          Datum d = slot.get(lp.hash_col, r);
          if (!is_null(d)) (*lp.index)[join_key(d)].push_back(r);
        }
      }
      Datum key = eval(*lp.probe, f);
      if (is_null(key)) return;
      auto it = lp.index->find(join_key(key));
      if (it == lp.index->end()) return;
      for (auto r : it->second) visit(r);
      return;
    }
    for (std::uint64_t r = 0; r < slot.nrows; ++r) visit(r);
  }

  void accumulate(const Expr &e, const Frame &f, Acc &a) {
    if (e.args.empty() || e.args[0]->kind == ExprKind::Star) {
      ++a.count;
      return;
    }
    Datum v = eval(*e.args[0], f);
    if (is_null(v)) return;
    ++a.count;
    if (auto n = datum_number(v)) a.sum += *n;
    if (is_null(a.min) || compare(v, a.min, e) < 0) a.min = v;
    if (is_null(a.max) || compare(v, a.max, e) > 0) a.max = v;
  }

  Datum aggregate_value(const Expr &e, const Acc &a) {
    if (e.name == "COUNT") return a.count;
    if (a.count == 0) return Datum{};
    if (e.name == "SUM") return a.sum;
    if (e.name == "AVG") return a.sum / static_cast<double>(a.count);
    if (e.name == "MIN") return a.min;
    return a.max;
  }

  const Resolved &resolved(const Scope &s, const Expr &e) {
    auto it = s.cols.find(&e);
    if (it == s.cols.end()) throw Error("UnknownColumn", fmt::format("column '{}' is not bound", e.name));
    return it->second;
  }

  Datum column(const Expr &e, const Frame &f) {
    const Resolved &r = resolved(*f.scope, e);
    if (r.projection) return eval(*f.scope->q->query.projections[*r.projection].expr, f);
    const Frame *g = &f;
    for (int d = 0; d < r.depth; ++d) {
      g = g->parent;
      if (!g) throw Error("UnknownColumn", fmt::format("column '{}' has no enclosing row", e.name));
    }
    const Slot &slot = g->scope->slots[r.slot];
    std::size_t col = r.col;
    if (r.depth > 0) {
      auto c = slot.column(e.name);
      if (!c) throw Error("UnknownColumn", fmt::format("column '{}' has no data", e.name));
      col = *c;
    }
    return slot.get(col, (*g->tuple)[r.slot]);
  }

  const ResultSet &subquery(const Expr &e, const Frame &f, bool &cached) {
    auto it = f.scope->q->subqueries.find(&e);
    if (it == f.scope->q->subqueries.end()) throw Error("InvalidPredicate", "unbound subquery");
    const BoundQuery &sub = it->second;
    cached = !correlated(sub, 1);
    if (cached) {
      auto c = sub_cache_.find(&e);
      if (c != sub_cache_.end()) return c->second;
      auto scope = prepare(sub);
      return sub_cache_[&e] = execute(*scope, &f);
    }
    auto scope = prepare(sub);
    scratch_ = execute(*scope, &f);
    return scratch_;
  }

  static bool correlated(const BoundQuery &q, int level) {
    for (const auto &[e, bc] : q.columns) {
      if (bc.depth >= level) return true;
    }
    for (const auto &[e, sub] : q.subqueries) {
      if (correlated(sub, level + 1)) return true;
    }
    return false;
  }

  Datum eval(const Expr &e, const Frame &f) {
    switch (e.kind) {
      case ExprKind::Literal:
        switch (e.literal_kind) {
          case LiteralKind::Null: return Datum{};
          case LiteralKind::Integer: return e.integer;
          case LiteralKind::Real: return e.number;
          case LiteralKind::String: return e.text;
        }
        return Datum{};
      case ExprKind::Column: return column(e, f);
      case ExprKind::Star: type_error(e, "'*' is only valid in a select list or COUNT(*)");
      case ExprKind::Unary: {
        Datum v = eval(*e.args[0], f);
        if (e.unary_op == qlang::UnaryOp::Not) {
          auto t = truth(v);
          return t ? Datum{!*t} : Datum{};
        }
        if (is_null(v)) return v;
        if (const auto *i = std::get_if<std::int64_t>(&v)) return -*i;
        if (auto n = datum_number(v)) return -*n;
        type_error(e, "cannot negate " + datum_text(v));
      }
      case ExprKind::Binary: return binary(e, f);
      case ExprKind::Between: {
        Datum v = eval(*e.args[0], f);
        auto lo = compare(v, eval(*e.args[1], f), e), hi = compare(v, eval(*e.args[2], f), e);
        if (!lo || !hi) return Datum{};
        bool in = *lo >= 0 && *hi <= 0;
        return e.negated ? !in : in;
      }
      case ExprKind::InList: {
        Datum v = eval(*e.args[0], f);
        if (is_null(v)) return Datum{};
        bool unknown = false;
        for (std::size_t k = 1; k < e.args.size(); ++k) {
          auto c = compare(v, eval(*e.args[k], f), e);
          if (!c) unknown = true;
          else if (*c == 0) return !e.negated;
        }
        if (unknown) return Datum{};
        return e.negated;
      }
      case ExprKind::InSubquery: {
        Datum v = eval(*e.args[0], f);
        if (is_null(v)) return Datum{};
        bool cached = false;
        const ResultSet &rs = subquery(e, f, cached);
        if (cached) {
          auto &set = in_cache_[&e];
          if (set.empty()) {
            set.emplace("\x01");
            for (const auto &row : rs.rows) {
              if (!row.empty() && !is_null(row[0])) set.insert(join_key(row[0]));
            }
          }
          bool hit = set.count(join_key(v)) > 0;
          return e.negated ? !hit : hit;
        }
        for (const auto &row : rs.rows) {
          if (!row.empty() && compare(v, row[0], e) == 0) return !e.negated;
        }
        return e.negated;
      }
      case ExprKind::Subquery: {
        bool cached = false;
        const ResultSet &rs = subquery(e, f, cached);
        if (rs.rows.empty() || rs.rows[0].empty()) return Datum{};
        return rs.rows[0][0];
      }
      case ExprKind::Function: return function(e, f);
    }
    return Datum{};
  }

  Datum binary(const Expr &e, const Frame &f) {
    auto op = e.binary_op;
    if (op == BinaryOp::And || op == BinaryOp::Or) {
      auto a = truth(eval(*e.args[0], f));
      if (op == BinaryOp::And && a == false) return false;
      if (op == BinaryOp::Or && a == true) return true;
      auto b = truth(eval(*e.args[1], f));
      if (op == BinaryOp::And) {
        if (b == false) return false;
        if (a && b) return true;
        return Datum{};
      }
      if (b == true) return true;
      if (a && b) return false;
      return Datum{};
    }
    Datum a = eval(*e.args[0], f), b = eval(*e.args[1], f);
    switch (op) {
      case BinaryOp::Eq:
      case BinaryOp::Ne:
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: {
        auto c = compare(a, b, e);
        if (!c) return Datum{};
        switch (op) {
          case BinaryOp::Eq: return *c == 0;
          case BinaryOp::Ne: return *c != 0;
          case BinaryOp::Lt: return *c < 0;
          case BinaryOp::Le: return *c <= 0;
          case BinaryOp::Gt: return *c > 0;
          default: return *c >= 0;
        }
      }
      default: break;
    }
    if (is_null(a) || is_null(b)) return Datum{};
    const auto *ia = std::get_if<std::int64_t>(&a);
    const auto *ib = std::get_if<std::int64_t>(&b);
    if (ia && ib && op != BinaryOp::Div) {
      if (op == BinaryOp::Add) return *ia + *ib;
      if (op == BinaryOp::Sub) return *ia - *ib;
      return *ia * *ib;
    }
    auto x = datum_number(a), y = datum_number(b);
    if (!x || !y) type_error(e, fmt::format("arithmetic on {} and {}", datum_text(a), datum_text(b)));
    switch (op) {
      case BinaryOp::Add: return *x + *y;
      case BinaryOp::Sub: return *x - *y;
      case BinaryOp::Mul: return *x * *y;
      default:
        if (*y == 0.0) return Datum{};
        return *x / *y;
    }
  }

  Datum function(const Expr &e, const Frame &f) {
    const std::string &n = e.name;
    if (qlang::is_aggregate_name(n)) {
      if (!f.group) {
        throw Error("InvalidAggregate", fmt::format("{}:{}: {} is not allowed here", e.span.line, e.span.column, n));
      }
      auto it = f.scope->agg_index.find(&e);
      if (it == f.scope->agg_index.end()) throw Error("InvalidAggregate", "aggregate outside the select list");
      return aggregate_value(e, f.group->accs[it->second]);
    }
    std::vector<Datum> a;
    a.reserve(e.args.size());
    for (const auto &x : e.args) a.push_back(eval(*x, f));
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (a.size() < lo || a.size() > hi) {
        throw Error("InvalidPredicate",
                    fmt::format("{}:{}: {} takes {} to {} arguments", e.span.line, e.span.column, n, lo, hi));
      }
    };
    auto num = [&](std::size_t k) -> std::optional<double> {
      if (is_null(a[k])) return std::nullopt;
      auto v = datum_number(a[k]);
      if (!v) type_error(e, fmt::format("{} expects a number, got {}", n, datum_text(a[k])));
      return v;
    };
    auto geo = [&](std::size_t k) -> std::optional<Geo> {
      if (is_null(a[k])) return std::nullopt;
      auto g = as_geo(a[k]);
      if (!g) type_error(e, fmt::format("{} expects a geometry, got {}", n, datum_text(a[k])));
      return g;
    };

    if (n == "ST_DWITHIN") {
      arity(3, 3);
      auto x = geo(0), y = geo(1);
      auto r = num(2);
      if (!x || !y || !r) return Datum{};
      return geo_distance(*x, *y) <= *r;
    }
    if (n == "ST_DISTANCE") {
      arity(2, 2);
      auto x = geo(0), y = geo(1);
      if (!x || !y) return Datum{};
      return geo_distance(*x, *y);
    }
    if (n == "ST_INTERSECTS") {
      arity(2, 2);
      auto x = geo(0), y = geo(1);
      if (!x || !y) return Datum{};
      return x->box.intersects(y->box);
    }
    if (n == "ST_WITHIN" || n == "ST_CONTAINS") {
      arity(2, 2);
      auto x = geo(0), y = geo(1);
      if (!x || !y) return Datum{};
      return n == "ST_WITHIN" ? y->box.contains(x->box) : x->box.contains(y->box);
    }
    if (n == "ST_MAKEENVELOPE") {
      arity(4, 5);
      auto x0 = num(0), y0 = num(1), x1 = num(2), y1 = num(3);
      if (!x0 || !y0 || !x1 || !y1) return Datum{};
      return BBox{std::min(*y0, *y1), std::max(*y0, *y1), std::min(*x0, *x1), std::max(*x0, *x1)};
    }
    if (n == "ST_MAKEPOINT" || n == "ST_POINT") {
      arity(2, 3);
      auto x = num(0), y = num(1);
      if (!x || !y) return Datum{};
      return GeoPoint{*y, *x};
    }
    if (n == "ST_X" || n == "ST_Y" || n == "ST_CENTROID") {
      arity(1, 1);
      auto g = geo(0);
      if (!g) return Datum{};
      double lat = 0.5 * (g->box.lat_min + g->box.lat_max), lon = 0.5 * (g->box.lon_min + g->box.lon_max);
      if (n == "ST_X") return lon;
      if (n == "ST_Y") return lat;
      return GeoPoint{lat, lon};
    }
    if (n == "ABS") {
      arity(1, 1);
      if (const auto *i = std::get_if<std::int64_t>(&a[0])) return *i < 0 ? -*i : *i;
      auto v = num(0);
      return v ? Datum{std::abs(*v)} : Datum{};
    }
    if (n == "ROUND") {
      arity(1, 2);
      auto v = num(0);
      if (!v) return Datum{};
      double digits = a.size() > 1 ? num(1).value_or(0.0) : 0.0;
      double scale = std::pow(10.0, digits);
      return std::round(*v * scale) / scale;
    }
    if (n == "COALESCE") {
      for (auto &x : a) {
        if (!is_null(x)) return x;
      }
      return Datum{};
    }
    if (n == "GREATEST" || n == "LEAST") {
      Datum best;
      for (auto &x : a) {
        if (is_null(x)) continue;
        if (is_null(best)) best = x;
        else if (auto c = compare(x, best, e); c && (n == "GREATEST" ? *c > 0 : *c < 0)) best = x;
      }
      return best;
    }
    if (n == "LOWER" || n == "UPPER") {
      arity(1, 1);
      if (is_null(a[0])) return Datum{};
      std::string s = datum_text(a[0]);
      for (auto &c : s) {
        c = static_cast<char>(n == "LOWER" ? std::tolower(static_cast<unsigned char>(c))
                                           : std::toupper(static_cast<unsigned char>(c)));
      }
      return s;
    }
    throw Error("UnknownFunction", fmt::format("{}:{}: unknown function {}", e.span.line, e.span.column, n));
  }

  const DataSource &data_;
  std::map<const Expr *, ResultSet> sub_cache_;
  std::map<const Expr *, std::set<std::string>> in_cache_;
  ResultSet scratch_;
  std::vector<std::pair<std::size_t, std::size_t>> star_;
};

}  // namespace

bool is_null(const Datum &d) { return std::holds_alternative<std::monostate>(d); }

std::optional<double> datum_number(const Datum &d) {
  if (const auto *i = std::get_if<std::int64_t>(&d)) return static_cast<double>(*i);
  if (const auto *x = std::get_if<double>(&d)) return *x;
  if (const auto *b = std::get_if<bool>(&d)) return *b ? 1.0 : 0.0;
  return std::nullopt;
}

std::string datum_text(const Datum &d) {
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "NULL";
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::int64_t>) return fmt::format("{}", v);
        else if constexpr (std::is_same_v<T, double>) return fmt::format("{:.6g}", v);
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, GeoPoint>) return fmt::format("POINT({} {})", v.lon, v.lat);
        else if constexpr (std::is_same_v<T, BBox>)
          return fmt::format("BOX({:.2f} {:.2f}, {:.2f} {:.2f})", v.lon_min, v.lat_min, v.lon_max, v.lat_max);
        else return gridstore::format_timestamp(v.t);
      },
      d);
}

nlohmann::json datum_json(const Datum &d) {
  return std::visit(
      [](const auto &v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, std::int64_t> ||
                           std::is_same_v<T, std::string>)
          return v;
        else if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
        else if constexpr (std::is_same_v<T, GeoPoint>)
          return nlohmann::json{{"type", "Point"}, {"coordinates", {v.lon, v.lat}}};
        else if constexpr (std::is_same_v<T, BBox>)
          return nlohmann::json{{"bbox", {v.lat_min, v.lat_max, v.lon_min, v.lon_max}}};
        else return gridstore::format_timestamp(v.t);
      },
      d);
}

nlohmann::json ResultSet::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto &row : rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto &d : row) r.push_back(datum_json(d));
    rs.push_back(std::move(r));
  }
  return {{"columns", columns}, {"rows", rs}};
}

std::string ResultSet::to_text(std::size_t max_rows) const {
  std::size_t n = std::min(max_rows, rows.size());
  std::vector<std::size_t> width;
  for (const auto &c : columns) width.push_back(c.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      line.push_back(datum_text(rows[r][c]));
      if (c < width.size()) width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  std::string out;
  auto emit = [&](const std::vector<std::string> &line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      out += fmt::format("{}{:<{}}", c ? " | " : "", line[c], c < width.size() ? width[c] : 0);
    }
    out += "\n";
  };
  emit(columns);
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c) rule += (c ? "-+-" : "") + std::string(width[c], '-');
  out += rule + "\n";
  for (const auto &line : cells) emit(line);
  out += fmt::format("({} rows)\n", rows.size());
  return out;
}

ResultSet evaluate(const qlang::BoundQuery &query, const DataSource &data) {
  return Evaluator(data).run(query, nullptr);
}

double answer_accuracy(const ResultSet &answer, const ResultSet &reference) {
  auto floating = [](const ResultSet &rs) {
    std::vector<bool> fl(rs.columns.size(), false);
    for (const auto &row : rs.rows) {
      for (std::size_t c = 0; c < row.size() && c < fl.size(); ++c) {
        if (std::holds_alternative<double>(row[c])) fl[c] = true;
      }
    }
    return fl;
  };
  auto fa = floating(answer), fr = floating(reference);
  std::vector<bool> fl(std::max(fa.size(), fr.size()), false);
  for (std::size_t c = 0; c < fl.size(); ++c) fl[c] = (c < fa.size() && fa[c]) || (c < fr.size() && fr[c]);

  using Means = std::map<std::string, std::pair<std::vector<double>, std::vector<int>>>;
  auto reduce = [&](const ResultSet &rs) {
    Means m;
    for (const auto &row : rs.rows) {
      std::string key;
      std::vector<double> v;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c < fl.size() && fl[c]) {
          auto x = datum_number(row[c]);
          v.push_back(x ? *x : kNaN);
        } else {
          key += datum_key(row[c]) + "|";
        }
      }
      auto &slot = m[key];
      if (slot.first.empty()) {
        slot.first.assign(v.size(), 0.0);
        slot.second.assign(v.size(), 0);
      }
      for (std::size_t c = 0; c < v.size() && c < slot.first.size(); ++c) {
        if (std::isnan(v[c])) continue;
        slot.first[c] += v[c];
        slot.second[c] += 1;
      }
    }
    for (auto &[k, s] : m) {
      for (std::size_t c = 0; c < s.first.size(); ++c) s.first[c] = s.second[c] ? s.first[c] / s.second[c] : 0.0;
    }
    return m;
  };
  Means a = reduce(answer), r = reduce(reference);
  double err = 0.0, norm = 0.0;
  for (const auto &[k, rv] : r) {
    auto it = a.find(k);
    for (std::size_t c = 0; c < rv.first.size(); ++c) {
      double x = it != a.end() && c < it->second.first.size() ? it->second.first[c] : 0.0;
      err += (x - rv.first[c]) * (x - rv.first[c]);
      norm += rv.first[c] * rv.first[c];
    }
  }
  for (const auto &[k, av] : a) {
    if (r.count(k)) continue;
    for (double x : av.first) err += x * x;
  }
  if (norm == 0.0) return err == 0.0 ? 1.0 : 0.0;
  return 1.0 - std::sqrt(err) / std::sqrt(norm);
}

}  // namespace genie::engine
