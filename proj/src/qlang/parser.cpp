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

#include "genie/qlang/parser.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "genie/qlang/keywords.h"

namespace genie::qlang {

namespace {

constexpr int kMaxDepth = 256;

std::string upper(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string lower(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

enum class HintAxis { Spatial, Temporal, Other };

HintAxis axis_of(const std::string &key) {
  auto dot = key.rfind('.');
  std::string base = lower(dot == std::string::npos ? key : key.substr(dot + 1));
  if (base == "spatial_res") return HintAxis::Spatial;
  if (base == "temporal_res" || base == "run_duration") return HintAxis::Temporal;
  return HintAxis::Other;
}

struct Normalized {
  std::optional<double> value;
  std::string bad_unit;  // non-empty when the unit does not fit the key
};

Normalized normalize(const std::string &key, const HintValue &v) {
  Normalized out;
  if (v.kind == HintValueKind::Number) {
    out.value = v.number;
    return out;
  }
  std::string s = trim(v.text);
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || !std::isfinite(x)) return out;
  std::string unit = lower(trim(std::string_view(ptr, s.data() + s.size() - ptr)));
  if (unit.empty()) {
    out.value = x;
    return out;
  }
  switch (axis_of(key)) {
    case HintAxis::Spatial:
      if (unit == "km") out.value = x / kKmPerDegree;
      else if (unit == "m") out.value = x / (kKmPerDegree * 1000.0);
      else if (unit == "deg" || unit == "degree" || unit == "degrees") out.value = x;
      else out.bad_unit = unit;
      break;
    case HintAxis::Temporal:
      if (unit == "hr" || unit == "h" || unit == "hour" || unit == "hours") out.value = x;
      else if (unit == "min" || unit == "mins" || unit == "minute" || unit == "minutes") out.value = x / 60.0;
      else out.bad_unit = unit;
      break;
    case HintAxis::Other:
      break;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Script script() {
    Script s;
    for (;;) {
      while (at_symbol(";")) ++pos_;
      if (at_end()) break;
      s.statements.push_back(statement());
      if (!at_end()) expect_symbol(";");
    }
    return s;
  }

  Statement single_statement() {
    while (at_symbol(";")) ++pos_;
    Statement st = statement();
    while (at_symbol(";")) ++pos_;
    expect_end();
    return st;
  }

  ExprPtr single_expression() {
    ExprPtr e = expr();
    expect_end();
    return e;
  }

  HintClause single_hint() {
    HintClause h;
    if (at_keyword("WITH")) {
      h = hint_clause();
    } else {
      Span start = cur().span;
      h.entries = hint_entries();
      h.span = cover(start, prev().span);
    }
    expect_end();
    return h;
  }

 private:
  // ---- token helpers -------------------------------------------------

  const Token &cur() const { return tokens_[pos_]; }
  const Token &peek_tok(std::size_t k) const {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  const Token &prev() const { return tokens_[pos_ ? pos_ - 1 : 0]; }
  bool at_end() const { return cur().kind == TokenKind::End; }

  static bool is_keyword(const Token &t, const char *kw) {
    return t.kind == TokenKind::Identifier && upper(t.text) == kw;
  }
  static bool is_symbol(const Token &t, const char *s) { return t.kind == TokenKind::Symbol && t.text == s; }

  bool at_keyword(const char *kw) const { return is_keyword(cur(), kw); }
  bool at_symbol(const char *s) const { return is_symbol(cur(), s); }

  bool accept_keyword(const char *kw) {
    if (!at_keyword(kw)) return false;
    ++pos_;
    return true;
  }
  bool accept_symbol(const char *s) {
    if (!at_symbol(s)) return false;
    ++pos_;
    return true;
  }

  static std::string describe(const Token &t) {
    switch (t.kind) {
      case TokenKind::End: return "end of input";
      case TokenKind::Identifier:
        return is_reserved(upper(t.text)) ? "keyword " + upper(t.text) : "identifier '" + t.text + "'";
      case TokenKind::QuotedIdentifier: return "identifier \"" + t.text + "\"";
      case TokenKind::Integer:
      case TokenKind::Real: return "number " + t.text + t.suffix;
      case TokenKind::String: return "string literal";
      case TokenKind::Symbol: return "'" + t.text + "'";
    }
    return "token";
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(cur().span.line, cur().span.column, "unexpected " + describe(cur()), std::move(expected));
  }

  [[noreturn]] void fail_at(const Span &at, const std::string &detail) const {
    throw SyntaxError(at.line, at.column, detail);
  }

  void expect_keyword(const char *kw) {
    if (!accept_keyword(kw)) fail({kw});
  }
  void expect_symbol(const char *s) {
    if (!accept_symbol(s)) fail({fmt::format("'{}'", s)});
  }
  void expect_end() {
    if (!at_end()) fail({"end of input"});
  }

  bool at_identifier() const {
    const Token &t = cur();
    if (t.kind == TokenKind::QuotedIdentifier) return true;
    return t.kind == TokenKind::Identifier && !is_reserved(upper(t.text));
  }

  std::string identifier(const char *what = "identifier") {
    if (!at_identifier()) fail({what});
    return tokens_[pos_++].text;
  }

  static Span cover(const Span &a, const Span &b) {
    Span s = a;
    s.end = b.end;
    return s;
  }

  struct DepthGuard {
    explicit DepthGuard(Parser &p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) {
        p_.fail_at(p_.cur().span, "nesting too deep");
      }
    }
    ~DepthGuard() { --p_.depth_; }
    Parser &p_;
  };

  // ---- statements ----------------------------------------------------

  Statement statement() {
    Span start = cur().span;
    Statement st;
    if (at_keyword("SELECT")) {
      st.payload = SelectStmt{select_query(true)};
    } else if (at_keyword("REGISTER")) {
      st.payload = register_simulator();
    } else if (at_keyword("CREATE")) {
      st.payload = create_table();
    } else if (at_keyword("ALTER")) {
      st.payload = alter_table();
    } else {
      fail({"SELECT", "REGISTER", "CREATE", "ALTER"});
    }
    st.span = cover(start, prev().span);
    return st;
  }

  ExprPtr numeric_literal(bool allow_sign) {
    Span start = cur().span;
    bool negative = false;
    if (allow_sign && (at_symbol("-") || at_symbol("+"))) {
      negative = at_symbol("-");
      ++pos_;
    }
    if (cur().kind != TokenKind::Integer && cur().kind != TokenKind::Real) fail({"number"});
    ExprPtr e = number_from(cur(), negative);
    ++pos_;
    e->span = cover(start, prev().span);
    return e;
  }

  ExprPtr number_from(const Token &t, bool negative) {
    if (!t.suffix.empty()) fail_at(t.span, "malformed number '" + t.text + t.suffix + "'");
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Literal;
    e->text = (negative ? "-" : "") + t.text;
    if (t.kind == TokenKind::Integer) {
      std::uint64_t mag = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), mag);
      const std::uint64_t limit = negative ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << 63) - 1;
      if (ec != std::errc() || mag > limit) fail_at(t.span, "integer literal out of range");
      e->literal_kind = LiteralKind::Integer;
      e->integer = negative ? static_cast<std::int64_t>(0 - mag) : static_cast<std::int64_t>(mag);
    } else {
      double v = 0.0;
      std::string spelled = t.text;
      if (!spelled.empty() && spelled.back() == '.') spelled.pop_back();
      auto [p, ec] = std::from_chars(spelled.data(), spelled.data() + spelled.size(), v);
      if (ec != std::errc() || !std::isfinite(v)) fail_at(t.span, "real literal out of range");
      e->literal_kind = LiteralKind::Real;
      e->number = negative ? -v : v;
    }
    return e;
  }

  TypeName type_name() {
    if (cur().kind != TokenKind::Identifier) fail({"type name"});
    std::string t = upper(cur().text);
    TypeName out;
    if (t == "INTEGER" || t == "INT") out.tag = TypeTag::Integer;
    else if (t == "REAL" || t == "FLOAT" || t == "DOUBLE") out.tag = TypeTag::Real;
    else if (t == "TEXT") out.tag = TypeTag::Text;
    else if (t == "VARCHAR") out.tag = TypeTag::Varchar;
    else if (t == "GEOMETRY") out.tag = TypeTag::Geometry;
    else if (t == "TIMESTAMP") out.tag = TypeTag::Timestamp;
    else if (t == "BOOLEAN" || t == "BOOL") out.tag = TypeTag::Boolean;
    else fail({"type name"});
    ++pos_;
    if (out.tag == TypeTag::Varchar && accept_symbol("(")) {
      if (cur().kind != TokenKind::Integer || !cur().suffix.empty()) fail({"length"});
      int n = 0;
      auto [p, ec] = std::from_chars(cur().text.data(), cur().text.data() + cur().text.size(), n);
      if (ec != std::errc() || n <= 0) fail_at(cur().span, "invalid VARCHAR length");
      out.length = n;
      ++pos_;
      expect_symbol(")");
    }
    return out;
  }

  RegisterSimulatorStmt register_simulator() {
    expect_keyword("REGISTER");
    expect_keyword("SIMULATOR");
    RegisterSimulatorStmt s;
    s.name = identifier();
    expect_keyword("EXECUTABLE");
    if (cur().kind != TokenKind::String) fail({"string literal"});
    s.executable_ref = tokens_[pos_++].text;
    if (accept_keyword("PARAMETERS")) {
      expect_symbol("(");
      std::set<std::string> seen;
      do {
        ParameterDecl d;
        Span start = cur().span;
        d.name = identifier("parameter name");
        if (!seen.insert(d.name).second) fail_at(start, "duplicate parameter '" + d.name + "'");
        if (!at_keyword("REAL") && !at_keyword("INTEGER")) fail({"REAL", "INTEGER"});
        d.type = type_name();
        if (accept_keyword("DEFAULT")) {
          if (!accept_keyword("NULL")) d.default_value = numeric_literal(true);
        }
        d.span = cover(start, prev().span);
        s.parameters.push_back(std::move(d));
      } while (accept_symbol(","));
      expect_symbol(")");
    }
    if (accept_keyword("OUTPUT_FORMAT")) s.output_format = identifier("format name");
    return s;
  }

  CreateTableStmt create_table() {
    expect_keyword("CREATE");
    expect_keyword("TABLE");
    CreateTableStmt s;
    s.name = identifier("table name");
    expect_symbol("(");
    std::set<std::string> seen;
    do {
      ColumnDef c;
      Span start = cur().span;
      c.name = identifier("column name");
      if (!seen.insert(c.name).second) fail_at(start, "duplicate column '" + c.name + "'");
      c.type = type_name();
      for (;;) {
        if (accept_keyword("PRIMARY")) {
          expect_keyword("KEY");
          c.primary_key = true;
        } else if (accept_keyword("REFERENCES")) {
          std::string table = identifier("table name");
          expect_symbol("(");
          std::string column = identifier("column name");
          expect_symbol(")");
          c.references = std::make_pair(table, column);
        } else {
          break;
        }
      }
      c.span = cover(start, prev().span);
      s.columns.push_back(std::move(c));
    } while (accept_symbol(","));
    expect_symbol(")");
    return s;
  }

  AlterAddVirtualStmt alter_table() {
    expect_keyword("ALTER");
    expect_keyword("TABLE");
    AlterAddVirtualStmt s;
    s.table = identifier("table name");
    expect_keyword("ADD");
    accept_keyword("COLUMN");
    s.column = identifier("column name");
    s.value_type = type_name();
    expect_keyword("GENERATED");
    expect_keyword("BY");
    if (accept_keyword("SIMULATOR")) {
      s.simulators.push_back(identifier("simulator name"));
    } else if (accept_keyword("SIMULATORS")) {
      expect_symbol("(");
      do {
        s.simulators.push_back(identifier("simulator name"));
      } while (accept_symbol(","));
      expect_symbol(")");
    } else {
      fail({"SIMULATOR", "SIMULATORS"});
    }
    if (accept_keyword("ENSEMBLE")) {
      expect_keyword("METHOD");
      s.ensemble_method = identifier("ensemble method");
    }
    if (accept_keyword("WEIGHTS")) {
      expect_symbol("(");
      s.ensemble_weights = identifier("weight source");
      expect_symbol(")");
    }
    if (accept_keyword("DEPENDS")) {
      expect_keyword("ON");
      expect_symbol("(");
      do {
        std::string table = identifier("table name");
        expect_symbol(".");
        std::string column = identifier("column name");
        s.depends_on.emplace_back(std::move(table), std::move(column));
      } while (accept_symbol(","));
      expect_symbol(")");
    }
    if (s.simulators.size() > 1 && !s.ensemble_method) {
      fail_at(cur().span, "multiple simulators require ENSEMBLE METHOD");
    }
    return s;
  }

  // ---- SELECT --------------------------------------------------------

  TableRef table_ref() {
    TableRef r;
    r.span = cur().span;
    r.name = identifier("table name");
    if (accept_keyword("AS")) {
      r.alias = identifier("alias");
    } else if (at_identifier()) {
      r.alias = identifier();
    }
    r.span = cover(r.span, prev().span);
    return r;
  }

  SelectQuery select_query(bool allow_hint) {
    DepthGuard guard(*this);
    SelectQuery q;
    Span start = cur().span;
    expect_keyword("SELECT");
    do {
      SelectItem item;
      item.span = cur().span;
      if (at_symbol("*")) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Star;
        e->span = cur().span;
        ++pos_;
        item.expr = e;
      } else {
        item.expr = expr();
      }
      if (accept_keyword("AS")) {
        item.alias = identifier("alias");
      } else if (at_identifier()) {
        item.alias = identifier();
      }
      item.span = cover(item.span, prev().span);
      q.projections.push_back(std::move(item));
    } while (accept_symbol(","));

    if (accept_keyword("FROM")) {
      q.has_from = true;
      q.from = table_ref();
      for (;;) {
        Span js = cur().span;
        if (accept_keyword("INNER")) {
          expect_keyword("JOIN");
        } else if (!accept_keyword("JOIN")) {
          break;
        }
        Join j;
        j.table = table_ref();
        expect_keyword("ON");
        j.on = expr();
        j.span = cover(js, prev().span);
        q.joins.push_back(std::move(j));
      }
    }
    if (accept_keyword("WHERE")) q.where = expr();
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      do {
        q.group_by.push_back(expr());
      } while (accept_symbol(","));
    }
    if (accept_keyword("HAVING")) q.having = expr();
    if (allow_hint && at_keyword("WITH")) q.hint = hint_clause();
    q.span = cover(start, prev().span);
    return q;
  }

  // ---- hints ---------------------------------------------------------

  HintClause hint_clause() {
    HintClause h;
    Span start = cur().span;
    expect_keyword("WITH");
    expect_keyword("HINT");
    h.entries = hint_entries();
    h.span = cover(start, prev().span);
    return h;
  }

  std::vector<HintEntry> hint_entries() {
    std::vector<HintEntry> out;
    expect_symbol("(");
    do {
      HintEntry e;
      e.span = cur().span;
      e.key = identifier("hint name");
      if (accept_symbol(".")) e.key += "." + identifier("parameter name");
      expect_symbol("=");
      Span vspan = cur().span;
      e.value = hint_value();
      Normalized n = normalize(e.key, e.value);
      if (!n.bad_unit.empty()) {
        fail_at(vspan, fmt::format("unit '{}' does not apply to {}", n.bad_unit, e.key));
      }
      e.value.normalized = n.value;
      e.span = cover(e.span, prev().span);
      out.push_back(std::move(e));
    } while (accept_symbol(","));
    expect_symbol(")");
    return out;
  }

  HintValue hint_value() {
    HintValue v;
    const Token &t = cur();
    if (t.kind == TokenKind::String) {
      v.kind = HintValueKind::String;
      v.text = t.text;
      ++pos_;
      return v;
    }
    if (at_identifier()) {
      v.kind = HintValueKind::String;
      v.text = identifier();
      return v;
    }
    bool negative = false;
    std::size_t save = pos_;
    if (at_symbol("-") || at_symbol("+")) {
      negative = at_symbol("-");
      ++pos_;
    }
    const Token &n = cur();
    if (n.kind != TokenKind::Integer && n.kind != TokenKind::Real) {
      pos_ = save;
      fail({"number", "string literal"});
    }
    if (!n.suffix.empty()) {
      v.kind = HintValueKind::String;
      v.text = (negative ? "-" : "") + n.text + n.suffix;
      ++pos_;
      return v;
    }
    ExprPtr lit = number_from(n, negative);
    ++pos_;
    v.kind = HintValueKind::Number;
    v.text = lit->text;
    v.number = lit->literal_kind == LiteralKind::Integer ? static_cast<double>(lit->integer) : lit->number;
    return v;
  }

  // ---- expressions ---------------------------------------------------

  ExprPtr make(ExprKind kind, const Span &span) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->span = span;
    return e;
  }

  ExprPtr binary(BinaryOp op, ExprPtr l, ExprPtr r) {
    auto e = make(ExprKind::Binary, cover(l->span, r->span));
    e->binary_op = op;
    e->args = {std::move(l), std::move(r)};
    return e;
  }

  ExprPtr expr() {
    DepthGuard guard(*this);
    ExprPtr l = and_expr();
    while (accept_keyword("OR")) l = binary(BinaryOp::Or, l, and_expr());
    return l;
  }

  ExprPtr and_expr() {
    ExprPtr l = not_expr();
    while (accept_keyword("AND")) l = binary(BinaryOp::And, l, not_expr());
    return l;
  }

  ExprPtr not_expr() {
    if (at_keyword("NOT")) {
      DepthGuard guard(*this);
      Span start = cur().span;
      ++pos_;
      ExprPtr operand = not_expr();
      auto e = make(ExprKind::Unary, cover(start, operand->span));
      e->unary_op = UnaryOp::Not;
      e->args = {std::move(operand)};
      return e;
    }
    return comparison();
  }

  ExprPtr comparison() {
    ExprPtr l = additive();
    static const std::pair<const char *, BinaryOp> kOps[] = {
        {"=", BinaryOp::Eq}, {"<>", BinaryOp::Ne}, {"!=", BinaryOp::Ne}, {"<", BinaryOp::Lt},
        {"<=", BinaryOp::Le}, {">", BinaryOp::Gt},  {">=", BinaryOp::Ge},
    };
    for (const auto &[sym, op] : kOps) {
      if (accept_symbol(sym)) return binary(op, l, additive());
    }
    bool negated = false;
    if (at_keyword("NOT") && (is_keyword(peek_tok(1), "BETWEEN") || is_keyword(peek_tok(1), "IN"))) {
      negated = true;
      ++pos_;
    }
    if (accept_keyword("BETWEEN")) {
      ExprPtr lo = additive();
      expect_keyword("AND");
      ExprPtr hi = additive();
      auto e = make(ExprKind::Between, cover(l->span, hi->span));
      e->negated = negated;
      e->args = {l, lo, hi};
      return e;
    }
    if (accept_keyword("IN")) {
      expect_symbol("(");
      ExprPtr e;
      if (at_keyword("SELECT")) {
        e = make(ExprKind::InSubquery, l->span);
        e->subquery = std::make_shared<SelectQuery>(select_query(false));
        e->args = {l};
      } else {
        e = make(ExprKind::InList, l->span);
        e->args = {l};
        do {
          e->args.push_back(expr());
        } while (accept_symbol(","));
      }
      expect_symbol(")");
      e->negated = negated;
      e->span = cover(l->span, prev().span);
      return e;
    }
    return l;
  }

  ExprPtr additive() {
    ExprPtr l = multiplicative();
    for (;;) {
      if (accept_symbol("+")) l = binary(BinaryOp::Add, l, multiplicative());
      else if (accept_symbol("-")) l = binary(BinaryOp::Sub, l, multiplicative());
      else return l;
    }
  }

  ExprPtr multiplicative() {
    ExprPtr l = unary();
    for (;;) {
      if (accept_symbol("*")) l = binary(BinaryOp::Mul, l, unary());
      else if (accept_symbol("/")) l = binary(BinaryOp::Div, l, unary());
      else return l;
    }
  }

  ExprPtr unary() {
    if (at_symbol("-")) {
      DepthGuard guard(*this);
      Span start = cur().span;
      const Token &next = peek_tok(1);
      if (next.kind == TokenKind::Integer || next.kind == TokenKind::Real) {
        return numeric_literal(true);
      }
      ++pos_;
      ExprPtr operand = unary();
      auto e = make(ExprKind::Unary, cover(start, operand->span));
      e->unary_op = UnaryOp::Neg;
      e->args = {std::move(operand)};
      return e;
    }
    return primary();
  }

  ExprPtr primary() {
    const Token &t = cur();
    switch (t.kind) {
      case TokenKind::Integer:
      case TokenKind::Real:
        return numeric_literal(false);
      case TokenKind::String: {
        auto e = make(ExprKind::Literal, t.span);
        e->literal_kind = LiteralKind::String;
        e->text = t.text;
        ++pos_;
        return e;
      }
      case TokenKind::Symbol:
        if (at_symbol("(")) return parenthesized();
        break;
      case TokenKind::Identifier:
        if (at_keyword("NULL")) {
          auto e = make(ExprKind::Literal, t.span);
          e->literal_kind = LiteralKind::Null;
          ++pos_;
          return e;
        }
        if (is_reserved(upper(t.text))) break;
        if (is_symbol(peek_tok(1), "(")) return function_call();
        return column_ref();
      case TokenKind::QuotedIdentifier:
        return column_ref();
      case TokenKind::End:
        break;
    }
    fail({"expression"});
  }

  ExprPtr parenthesized() {
    Span start = cur().span;
    expect_symbol("(");
    ExprPtr e;
    if (at_keyword("SELECT")) {
      e = make(ExprKind::Subquery, start);
      e->subquery = std::make_shared<SelectQuery>(select_query(false));
    } else {
      e = expr();
    }
    expect_symbol(")");
    e->span = cover(start, prev().span);
    return e;
  }

  ExprPtr function_call() {
    Span start = cur().span;
    auto e = make(ExprKind::Function, start);
    e->name = upper(cur().text);
    ++pos_;
    expect_symbol("(");
    if (at_symbol("*")) {
      if (e->name != "COUNT") fail({"expression"});
      e->args.push_back(make(ExprKind::Star, cur().span));
      ++pos_;
    } else if (!at_symbol(")")) {
      do {
        e->args.push_back(expr());
      } while (accept_symbol(","));
    }
    expect_symbol(")");
    e->span = cover(start, prev().span);
    return e;
  }

  ExprPtr column_ref() {
    Span start = cur().span;
    auto e = make(ExprKind::Column, start);
    e->name = identifier("column name");
    if (accept_symbol(".")) {
      e->qualifier = e->name;
      e->name = identifier("column name");
    }
    e->span = cover(start, prev().span);
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

Script parse(std::string_view text) { return Parser(text).script(); }

Statement parse_statement(std::string_view text) { return Parser(text).single_statement(); }

ExprPtr parse_expression(std::string_view text) { return Parser(text).single_expression(); }

HintClause parse_hint(std::string_view text) { return Parser(text).single_hint(); }

std::optional<double> normalize_hint_value(const std::string &key, const HintValue &value) {
  Normalized n = normalize(key, value);
  if (!n.bad_unit.empty()) return std::nullopt;
  return n.value;
}

}  // namespace genie::qlang
