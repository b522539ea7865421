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

#include "genie/qlang/lexer.h"

#include <array>
#include <string_view>

#include <fmt/format.h>

#include "genie/qlang/keywords.h"

namespace genie::qlang {

namespace {

std::string format_message(int line, int column, const std::string &detail,
                           const std::vector<std::string> &expected) {
  std::string msg = fmt::format("{}:{}: {}", line, column, detail);
  if (!expected.empty()) {
    msg += "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
  }
  return msg;
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

std::string printable(char c) {
  auto u = static_cast<unsigned char>(c);
  if (u >= 0x20 && u < 0x7f) return fmt::format("'{}'", c);
  return fmt::format("byte 0x{:02x}", u);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      if (pos_ >= text_.size()) {
        Token end;
        end.kind = TokenKind::End;
        end.span = here();
        out.push_back(end);
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  Span here() const {
    Span s;
    s.begin = s.end = pos_;
    s.line = line_;
    s.column = column_;
    return s;
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        Span start = here();
        advance();
        advance();
        while (pos_ < text_.size() && !(text_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ >= text_.size()) throw SyntaxError(start.line, start.column, "unterminated block comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token finish(Token tok) {
    tok.span.end = pos_;
    return tok;
  }

  Token next() {
    Token tok;
    tok.span = here();
    char c = text_[pos_];

    if (is_ident_start(c)) {
      tok.kind = TokenKind::Identifier;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
      tok.text = std::string(text_.substr(tok.span.begin, pos_ - tok.span.begin));
      return finish(std::move(tok));
    }

    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return number(std::move(tok));

    if (c == '\'' || c == '"') {
      char quote = c;
      tok.kind = quote == '\'' ? TokenKind::String : TokenKind::QuotedIdentifier;
      advance();
      for (;;) {
        if (pos_ >= text_.size()) {
          throw SyntaxError(tok.span.line, tok.span.column,
                            quote == '\'' ? "unterminated string literal" : "unterminated quoted identifier");
        }
        char d = text_[pos_];
        if (d == quote) {
          if (peek(1) == quote) {
            tok.text += quote;
            advance();
            advance();
            continue;
          }
          advance();
          break;
        }
        tok.text += d;
        advance();
      }
      if (tok.kind == TokenKind::QuotedIdentifier && tok.text.empty()) {
        throw SyntaxError(tok.span.line, tok.span.column, "empty quoted identifier");
      }
      return finish(std::move(tok));
    }

    tok.kind = TokenKind::Symbol;
    auto two = [&](const char *s) {
      if (c == s[0] && peek(1) == s[1]) {
        tok.text = s;
        advance();
        advance();
        return true;
      }
      return false;
    };
    if (two("<=") || two(">=") || two("<>") || two("!=")) return finish(std::move(tok));
    switch (c) {
      case '(': case ')': case ',': case ';': case '.': case '*':
      case '=': case '<': case '>': case '+': case '-': case '/':
        tok.text = std::string(1, c);
        advance();
        return finish(std::move(tok));
      default:
        throw SyntaxError(tok.span.line, tok.span.column, "unexpected character " + printable(c));
    }
  }

  Token number(Token tok) {
    bool real = false;
    while (is_digit(peek())) advance();
    if (peek() == '.' && is_digit(peek(1))) {
      real = true;
      advance();
      while (is_digit(peek())) advance();
    } else if (peek() == '.' && !is_ident_start(peek(1))) {
      // "1." is a real literal; "t1.c" never reaches here
      real = true;
      advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (is_digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
      real = true;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      while (is_digit(peek())) advance();
    }
    tok.kind = real ? TokenKind::Real : TokenKind::Integer;
    tok.text = std::string(text_.substr(tok.span.begin, pos_ - tok.span.begin));
    std::size_t unit_begin = pos_;
    while (is_ident_char(peek())) advance();
    tok.suffix = std::string(text_.substr(unit_begin, pos_ - unit_begin));
    return finish(std::move(tok));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

SyntaxError::SyntaxError(int line, int column, std::string detail, std::vector<std::string> expected)
    : Error("SyntaxError", format_message(line, column, detail, expected)),
      line_(line),
      column_(column),
      detail_(std::move(detail)),
      expected_(std::move(expected)) {}

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

bool is_reserved(const std::string &upper_word) {
  static constexpr std::array<std::string_view, 21> kReserved = {
      "SELECT", "FROM", "WHERE", "JOIN", "INNER", "ON",   "GROUP", "BY",    "HAVING", "WITH",  "AND",
      "OR",     "NOT",  "BETWEEN", "IN", "AS",    "NULL", "ORDER", "LIMIT", "UNION",  "DISTINCT",
  };
  for (auto w : kReserved) {
    if (w == upper_word) return true;
  }
  return false;
}

}  // namespace genie::qlang
