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

#include "genie/qlang/ast.h"
#include "genie/qlang/lexer.h"

namespace genie::qlang {

/// Kilometres per degree used when normalizing metric hint values.
inline constexpr double kKmPerDegree = 111.32;

/// Parses a script of `;`-separated statements. Keywords are matched
/// case-insensitively; identifiers keep their spelling. Throws SyntaxError.
Script parse(std::string_view text);

/// Parses exactly one statement (a trailing `;` is optional).
Statement parse_statement(std::string_view text);

/// Parses exactly one expression.
ExprPtr parse_expression(std::string_view text);

/// Parses a `WITH HINT (...)` clause or a bare `(k=v, ...)` list.
HintClause parse_hint(std::string_view text);

/// Converts a hint literal for `key` to degrees (spatial keys) or hours
/// (temporal keys). Bare numbers are taken as already in those units;
/// strings may carry a 'km', 'm', 'deg', 'hr', 'h' or 'min' suffix.
std::optional<double> normalize_hint_value(const std::string &key, const HintValue &value);

}  // namespace genie::qlang
