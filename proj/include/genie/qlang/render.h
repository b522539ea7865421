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

#include "genie/qlang/ast.h"

namespace genie::qlang {

// Canonical text: upper-case keywords and function names, single spaces,
// minimal parentheses, every statement terminated by ';'. Statements are
// separated by newlines.
std::string render(const Script &script);
std::string render(const Statement &stmt);
std::string render(const SelectQuery &query);
std::string render(const Expr &expr);
std::string render(const HintClause &hint);

}  // namespace genie::qlang
