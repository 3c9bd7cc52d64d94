// Copyright 2026 The modvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <string_view>

#include "modvar/grid.hpp"

namespace modvar {

/// Thrown for malformed arithmetic; `column` is 0-based within the expression.
class ExpressionError : public Error {
 public:
  ExpressionError(const std::string& what, std::size_t column) : Error(what), column_(column) {}
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Evaluates + - * / ^, parentheses, unary minus, `pi`, `sqrt()`, `sin()`,
/// `cos()`, `atan()`, `exp()` and any name in `variables`.
double evaluate_expression(std::string_view text,
                           const std::map<std::string, double>& variables = {});

}  // namespace modvar
