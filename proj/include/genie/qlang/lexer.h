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

#include <string>
#include <string_view>
#include <vector>

#include "genie/error.h"
#include "genie/qlang/ast.h"

namespace genie::qlang {

/// Raised for any lexical or grammatical problem. The message has the form
/// "line:col: message" and never spans more than one line.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::string detail, std::vector<std::string> expected = {});

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string &detail() const { return detail_; }
  const std::vector<std::string> &expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::string detail_;
  std::vector<std::string> expected_;
};

enum class TokenKind { Identifier, QuotedIdentifier, Integer, Real, String, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;    // identifier spelling, literal contents, or symbol
  std::string suffix;  // letters glued to a number ("1km"), hints only
  Span span;
};

/// Splits `text` into tokens. `--` line comments and `/* */` block
/// comments are skipped.
std::vector<Token> tokenize(std::string_view text);

}  // namespace genie::qlang
