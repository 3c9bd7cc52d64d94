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

#include "modvar/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace modvar {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::map<std::string, double>& vars)
      : text_(text), vars_(vars) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression: " + what, pos_);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }

  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        const double d = unary();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  // Right associative, binds tighter than unary minus on the left: -2^2 == -4.
  double power() {
    const double base = atom();
    if (eat('^')) return std::pow(base, unary());
    return base;
  }

  double atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const double v = sum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  double number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return v;
  }

  double name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string id(text_.substr(start, pos_ - start));
    if (eat('(')) {
      const double arg = sum();
      if (!eat(')')) fail("expected ')'");
      if (id == "sqrt") {
        if (arg < 0.0) fail("sqrt of a negative number");
        return std::sqrt(arg);
      }
      if (id == "sin") return std::sin(arg);
      if (id == "cos") return std::cos(arg);
      if (id == "atan") return std::atan(arg);
      if (id == "exp") return std::exp(arg);
      pos_ = start;
      fail("unknown function '" + id + "'");
    }
    if (id == "pi") return kPi;
    if (auto it = vars_.find(id); it != vars_.end()) return it->second;
    pos_ = start;
    fail("unknown name '" + id + "'");
  }

  std::string_view text_;
  const std::map<std::string, double>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

double evaluate_expression(std::string_view text, const std::map<std::string, double>& variables) {
  const double v = Parser(text, variables).parse();
  if (!std::isfinite(v)) throw ExpressionError("expression: result is not finite", 0);
  return v;
}

}  // namespace modvar
