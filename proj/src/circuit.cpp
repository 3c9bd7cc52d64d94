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

#include "modvar/circuit.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "modvar/expr.hpp"
#include "modvar/io.hpp"
#include "modvar/modular.hpp"
#include "modvar/operators.hpp"
#include "modvar/povm.hpp"
#include "modvar/readout.hpp"

#include <json.hpp>

namespace modvar {

ParseError::ParseError(const std::string& message, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

GridSpec default_grid() { return make_grid(2.0 * std::sqrt(kPi), 64, 32); }

namespace {

const std::set<std::string>& plain_gates() {
  static const std::set<std::string> g{"I",   "X",    "Y", "Z",    "Xdag", "Ydag", "Zdag",
                                       "S",   "Sdag", "F", "Fdag", "G1X",  "G1Y",  "G1Z"};
  return g;
}

bool is_builtin_observable(const std::string& name) {
  for (const auto& b : builtin_observable_names()) {
    if (b == name) return true;
  }
  return false;
}

const char* bell_name(BellState b) {
  switch (b) {
    case BellState::phi_plus:
      return "phi_plus";
    case BellState::phi_minus:
      return "phi_minus";
    case BellState::psi_plus:
      return "psi_plus";
    case BellState::psi_minus:
      break;
  }
  return "psi_minus";
}

const char* measure_name(ast::MeasureKind k) {
  switch (k) {
    case ast::MeasureKind::expectation:
      return "expectation";
    case ast::MeasureKind::povm:
      return "povm";
    case ast::MeasureKind::sample:
      return "sample";
    case ast::MeasureKind::correlator:
      return "correlator";
    case ast::MeasureKind::bloch:
      break;
  }
  return "bloch";
}

const char* dump_name(ast::DumpKind k) {
  switch (k) {
    case ast::DumpKind::density:
      return "density";
    case ast::DumpKind::state:
      return "state";
    case ast::DumpKind::modular:
      return "modular";
    case ast::DumpKind::joint:
      break;
  }
  return "joint";
}

// Cursor over one source line.
class Line {
 public:
  Line(const std::string& text, int number) : text_(text), number_(number) {}

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ParseError(what, number_, static_cast<int>(at) + 1);
  }
  [[noreturn]] void fail(const std::string& what) const { fail(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= text_.size();
  }
  // Column of the next token.
  std::size_t pos() {
    skip();
    return pos_;
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident(const char* what) {
    skip();
    const std::size_t start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
    }
    if (start == pos_) fail(std::string("expected ") + what);
    return text_.substr(start, pos_ - start);
  }

  // Raw text up to whitespace (top level) or ',' / ')' (inside an argument list),
  // respecting parentheses and double quotes.
  std::string value(bool in_list, std::size_t* start_out) {
    skip();
    const std::size_t start = pos_;
    if (start_out) *start_out = start;
    if (pos_ < text_.size() && text_[pos_] == '"') {
      const std::size_t close = text_.find('"', pos_ + 1);
      if (close == std::string::npos) fail("unterminated string");
      pos_ = close + 1;
      return text_.substr(start + 1, close - start - 1);
    }
    int depth = 0;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0 && (in_list ? c == ',' : std::isspace(static_cast<unsigned char>(c)) != 0)) break;
      ++pos_;
    }
    if (depth != 0) fail("unbalanced parentheses");
    std::string v = text_.substr(start, pos_ - start);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
    if (v.empty()) fail("expected a value");
    return v;
  }

  double number(const std::string& text, std::size_t at, const std::map<std::string, double>& vars) const {
    try {
      return evaluate_expression(text, vars);
    } catch (const ExpressionError& e) {
      fail(e.what(), at + e.column());
    }
  }

 private:
  const std::string& text_;
  int number_;
  std::size_t pos_ = 0;
};

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t key_at;
  std::size_t value_at;
};

// key=value pairs until end of line (top level) or ')' (list).
std::vector<KeyValue> key_values(Line& line, bool in_list) {
  std::vector<KeyValue> out;
  std::set<std::string> seen;
  if (in_list && line.peek() == ')') return out;
  for (;;) {
    if (!in_list && line.done()) break;
    KeyValue kv;
    kv.key_at = line.pos();
    kv.key = line.ident("a key=value option");
    line.expect('=');
    kv.value = line.value(in_list, &kv.value_at);
    if (!seen.insert(kv.key).second) line.fail("duplicate option '" + kv.key + "'", kv.key_at);
    out.push_back(std::move(kv));
    if (in_list && !line.eat(',')) break;
  }
  return out;
}

class Parser {
 public:
  CircuitProgram parse(const std::string& source) {
    CircuitProgram program;
    std::istringstream in(source);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      const std::size_t hash = raw.find('#');
      const std::string text = hash == std::string::npos ? raw : raw.substr(0, hash);
      Line line(text, number);
      if (line.done()) continue;
      program.statements.push_back(statement(line));
      program.lines.push_back(number);
    }
    return program;
  }

 private:
  std::map<std::string, double> vars() const { return {{"ell", ell_}}; }

  ast::Statement statement(Line& line) {
    const std::size_t at = line.pos();
    const std::string keyword = line.ident("a statement keyword");
    if (keyword == "grid") return grid(line, at);
    if (keyword == "state") return state(line);
    if (keyword == "observable") return observable(line);
    if (keyword == "apply") return apply(line);
    if (keyword == "measure") return measure(line);
    if (keyword == "dump") return dump(line);
    line.fail("unknown statement '" + keyword + "'", at);
  }

  int integer(const Line& line, const KeyValue& kv) {
    const double v = line.number(kv.value, kv.value_at, vars());
    if (v != std::round(v) || std::abs(v) > 1e15) line.fail(kv.key + " must be an integer", kv.value_at);
    return static_cast<int>(v);
  }

  ast::Grid grid(Line& line, std::size_t at) {
    if (grid_seen_) line.fail("grid declared twice", at);
    if (!registers_.empty()) line.fail("grid must come before any state", at);
    grid_seen_ = true;
    const GridSpec def = default_grid();
    ast::Grid g{def.ell, def.points_per_period, def.period_count};
    for (const auto& kv : key_values(line, false)) {
      if (kv.key == "ell") {
        g.ell = line.number(kv.value, kv.value_at, {});
      } else if (kv.key == "M") {
        g.M = integer(line, kv);
      } else if (kv.key == "P") {
        g.P = integer(line, kv);
      } else {
        line.fail("unknown grid option '" + kv.key + "'", kv.key_at);
      }
    }
    try {
      make_grid(g.ell, g.M, g.P);
    } catch (const Error& e) {
      line.fail(e.what(), at);
    }
    ell_ = g.ell;
    return g;
  }

  void comb_widths(Line& line, const KeyValue& kv, std::optional<double>& delta,
                   std::optional<double>& kappa, bool& handled) {
    handled = true;
    if (kv.key == "Delta") {
      delta = line.number(kv.value, kv.value_at, vars());
    } else if (kv.key == "kappa") {
      kappa = line.number(kv.value, kv.value_at, vars());
    } else {
      handled = false;
    }
  }

  ast::State state(Line& line) {
    ast::State st;
    std::vector<std::size_t> where;
    while (line.peek() != '=') {
      where.push_back(line.pos());
      st.registers.push_back(line.ident("a register name or '='"));
    }
    line.expect('=');
    if (st.registers.empty()) line.fail("state needs a register name");
    const std::size_t src_at = line.pos();
    const std::string source = line.ident("comb, logical or bell");
    line.expect('(');
    std::size_t bell_at = line.pos();
    std::string bell_which;
    if (source == "bell" && line.peek() != ')') {
      line.skip();
      bell_at = line.pos();
      bell_which = line.ident("phi_plus, phi_minus, psi_plus or psi_minus");
      if (line.peek() != ')') line.expect(',');
    }
    const auto kvs = key_values(line, true);
    line.expect(')');
    if (!line.done()) line.fail("unexpected text after state");

    const std::size_t want = source == "bell" ? 2 : 1;
    if (st.registers.size() != want) {
      line.fail(source + " prepares " + std::to_string(want) + " register(s), got " +
                    std::to_string(st.registers.size()),
                where.front());
    }
    for (std::size_t i = 0; i < st.registers.size(); ++i) {
      if (!registers_.insert(st.registers[i]).second) {
        line.fail("register '" + st.registers[i] + "' already declared", where[i]);
      }
    }
    if (st.registers.size() == 2 && st.registers[0] == st.registers[1]) {
      line.fail("bell needs two distinct registers", where[1]);
    }

    bool handled = false;
    if (source == "comb") {
      ast::Comb c;
      for (const auto& kv : kvs) {
        comb_widths(line, kv, c.delta, c.kappa, handled);
        if (handled) continue;
        if (kv.key == "offset") {
          if (kv.value == "0" || kv.value == "zero") {
            c.offset = CombOffset::zero;
          } else if (kv.value == "half") {
            c.offset = CombOffset::half;
          } else {
            line.fail("offset must be 0 or half", kv.value_at);
          }
        } else {
          line.fail("unknown comb option '" + kv.key + "'", kv.key_at);
        }
      }
      st.source = c;
    } else if (source == "logical") {
      ast::Logical l;
      for (const auto& kv : kvs) {
        comb_widths(line, kv, l.delta, l.kappa, handled);
        if (handled) continue;
        if (kv.key == "theta") {
          l.theta = line.number(kv.value, kv.value_at, vars());
        } else if (kv.key == "phi") {
          l.phi = line.number(kv.value, kv.value_at, vars());
        } else {
          line.fail("unknown logical option '" + kv.key + "'", kv.key_at);
        }
      }
      st.source = l;
    } else if (source == "bell") {
      ast::Bell b;
      if (bell_which == "phi_plus") {
        b.which = BellState::phi_plus;
      } else if (bell_which == "phi_minus") {
        b.which = BellState::phi_minus;
      } else if (bell_which == "psi_plus") {
        b.which = BellState::psi_plus;
      } else if (bell_which == "psi_minus") {
        b.which = BellState::psi_minus;
      } else {
        line.fail("bell needs phi_plus, phi_minus, psi_plus or psi_minus", bell_at);
      }
      for (const auto& kv : kvs) {
        comb_widths(line, kv, b.delta, b.kappa, handled);
        if (!handled) line.fail("unknown bell option '" + kv.key + "'", kv.key_at);
      }
      st.source = b;
    } else {
      line.fail("unknown state source '" + source + "'", src_at);
    }
    return st;
  }

  ast::Observable observable(Line& line) {
    ast::Observable o;
    const std::size_t at = line.pos();
    o.name = line.ident("an observable name");
    if (is_builtin_observable(o.name) || observables_.count(o.name) != 0) {
      line.fail("observable '" + o.name + "' already defined", at);
    }
    for (const auto& kv : key_values(line, false)) {
      if (kv.key != "file") line.fail("unknown observable option '" + kv.key + "'", kv.key_at);
      o.file = kv.value;
    }
    if (o.file.empty()) line.fail("observable needs file=PATH");
    observables_.insert(o.name);
    return o;
  }

  void use_register(Line& line, const std::string& name, std::size_t at) {
    if (registers_.count(name) == 0) line.fail("undeclared register '" + name + "'", at);
  }

  bool known_observable(const std::string& name) const {
    return is_builtin_observable(name) || observables_.count(name) != 0;
  }

  ast::Apply apply(Line& line) {
    ast::Apply a;
    const std::size_t at = line.pos();
    a.gate = line.ident("a gate name");
    if (line.eat('(')) {
      if (line.peek() != ')') {
        for (;;) {
          std::size_t vat = 0;
          const std::string v = line.value(true, &vat);
          a.args.push_back(line.number(v, vat, vars()));
          if (!line.eat(',')) break;
        }
      }
      line.expect(')');
    }
    std::size_t arity = 0;
    std::size_t regs = 1;
    if (a.gate == "ROT") {
      arity = 4;
    } else if (a.gate == "D") {
      arity = 2;
    } else if (a.gate == "CNOT" || a.gate == "CZ") {
      regs = 2;
    } else if (plain_gates().count(a.gate) == 0) {
      line.fail("unknown gate '" + a.gate + "'", at);
    }
    if (a.args.size() != arity) {
      line.fail("gate " + a.gate + " takes " + std::to_string(arity) + " argument(s)", at);
    }
    std::vector<std::size_t> where;
    while (!line.done()) {
      line.skip();
      where.push_back(line.pos());
      a.registers.push_back(line.ident("a register name"));
      use_register(line, a.registers.back(), where.back());
    }
    if (a.registers.size() != regs) {
      line.fail("gate " + a.gate + " acts on " + std::to_string(regs) + " register(s)", at);
    }
    if (regs == 2 && a.registers[0] == a.registers[1]) {
      line.fail("control and target must differ", where[1]);
    }
    return a;
  }

  ast::Measure measure(Line& line) {
    ast::Measure m;
    const std::size_t at = line.pos();
    const std::string kind = line.ident("a measurement kind");
    std::size_t targets = 1;
    std::size_t regs = 1;
    if (kind == "expectation") {
      m.kind = ast::MeasureKind::expectation;
    } else if (kind == "povm") {
      m.kind = ast::MeasureKind::povm;
    } else if (kind == "sample") {
      m.kind = ast::MeasureKind::sample;
    } else if (kind == "correlator") {
      m.kind = ast::MeasureKind::correlator;
      targets = 2;
      regs = 2;
    } else if (kind == "bloch") {
      m.kind = ast::MeasureKind::bloch;
      targets = 0;
    } else {
      line.fail("unknown measurement '" + kind + "'", at);
    }
    for (std::size_t i = 0; i < targets; ++i) {
      line.skip();
      const std::size_t tat = line.pos();
      m.targets.push_back(line.ident("an observable or gate name"));
      const std::string& t = m.targets.back();
      const bool gate_ok = (m.kind == ast::MeasureKind::povm || m.kind == ast::MeasureKind::sample) &&
                           plain_gates().count(t) != 0;
      if (!gate_ok && !known_observable(t)) {
        line.fail("unknown observable '" + t + "'", tat);
      }
    }
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < regs; ++i) {
      line.skip();
      where.push_back(line.pos());
      m.registers.push_back(line.ident("a register name"));
      use_register(line, m.registers.back(), where.back());
    }
    if (regs == 2 && m.registers[0] == m.registers[1]) line.fail("correlator needs two registers", where[1]);
    for (const auto& kv : key_values(line, false)) {
      if (kv.key == "shots" && (m.kind == ast::MeasureKind::povm || m.kind == ast::MeasureKind::sample)) {
        const std::int64_t shots = integer(line, kv);
        if (shots < 1) line.fail("shots must be at least 1", kv.value_at);
        m.shots = shots;
      } else if (kv.key == "seed" &&
                 (m.kind == ast::MeasureKind::povm || m.kind == ast::MeasureKind::sample)) {
        const double s = line.number(kv.value, kv.value_at, vars());
        if (s < 0 || s != std::round(s) || s > 9.007199254740992e15) {
          line.fail("seed must be a non-negative integer", kv.value_at);
        }
        m.seed = static_cast<std::uint64_t>(s);
      } else if (kv.key == "expect" && m.kind != ast::MeasureKind::bloch) {
        m.check.expect = line.number(kv.value, kv.value_at, vars());
      } else if (kv.key == "tol" && m.kind != ast::MeasureKind::bloch) {
        m.check.tol = line.number(kv.value, kv.value_at, vars());
        if (!(*m.check.tol >= 0.0)) line.fail("tol must be non-negative", kv.value_at);
      } else if (kv.key == "min" && m.kind != ast::MeasureKind::bloch) {
        m.check.min = line.number(kv.value, kv.value_at, vars());
      } else if (kv.key == "max" && m.kind != ast::MeasureKind::bloch) {
        m.check.max = line.number(kv.value, kv.value_at, vars());
      } else {
        line.fail("unknown option '" + kv.key + "' for measure " + kind, kv.key_at);
      }
    }
    if (m.check.tol && !m.check.expect) line.fail("tol needs expect", at);
    if (m.kind == ast::MeasureKind::sample && !m.shots) line.fail("sample needs shots=N", at);
    return m;
  }

  ast::Dump dump(Line& line) {
    ast::Dump d;
    const std::size_t at = line.pos();
    const std::string kind = line.ident("density, state, modular or joint");
    if (kind == "density") {
      d.kind = ast::DumpKind::density;
    } else if (kind == "state") {
      d.kind = ast::DumpKind::state;
    } else if (kind == "modular") {
      d.kind = ast::DumpKind::modular;
    } else if (kind == "joint") {
      d.kind = ast::DumpKind::joint;
    } else {
      line.fail("unknown dump '" + kind + "'", at);
    }
    line.skip();
    const std::size_t rat = line.pos();
    d.reg = line.ident("a register name");
    use_register(line, d.reg, rat);
    for (const auto& kv : key_values(line, false)) {
      if (kv.key == "file") {
        d.file = kv.value;
      } else if (kv.key == "phi" && d.kind == ast::DumpKind::density) {
        d.phi = line.number(kv.value, kv.value_at, vars());
      } else if (kv.key == "format" && d.kind == ast::DumpKind::joint) {
        if (kv.value != "csv" && kv.value != "binary") line.fail("format must be csv or binary", kv.value_at);
        d.binary = kv.value == "binary";
      } else {
        line.fail("unknown option '" + kv.key + "' for dump " + kind, kv.key_at);
      }
    }
    if (d.file.empty()) line.fail("dump needs file=PATH", at);
    return d;
  }

  bool grid_seen_ = false;
  double ell_ = default_grid().ell;
  std::set<std::string> registers_;
  std::set<std::string> observables_;
};

std::string quoted_if_needed(const std::string& s) {
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == ',' || c == '(' || c == ')') {
      return '"' + s + '"';
    }
  }
  return s;
}

void print_widths(std::ostream& out, const std::optional<double>& delta,
                  const std::optional<double>& kappa, bool& first) {
  auto sep = [&] {
    if (!first) out << ", ";
    first = false;
  };
  if (delta) {
    sep();
    out << "Delta=" << format_double(*delta);
  }
  if (kappa) {
    sep();
    out << "kappa=" << format_double(*kappa);
  }
}

struct Printer {
  std::ostream& out;

  void operator()(const ast::Grid& g) const {
    out << "grid ell=" << format_double(g.ell) << " M=" << g.M << " P=" << g.P;
  }
  void operator()(const ast::State& s) const {
    out << "state";
    for (const auto& r : s.registers) out << ' ' << r;
    out << " = ";
    bool first = true;
    if (const auto* c = std::get_if<ast::Comb>(&s.source)) {
      out << "comb(";
      print_widths(out, c->delta, c->kappa, first);
      out << (first ? "" : ", ") << "offset=" << (c->offset == CombOffset::half ? "half" : "0") << ')';
    } else if (const auto* l = std::get_if<ast::Logical>(&s.source)) {
      out << "logical(theta=" << format_double(l->theta) << ", phi=" << format_double(l->phi);
      first = false;
      print_widths(out, l->delta, l->kappa, first);
      out << ')';
    } else {
      const auto& b = std::get<ast::Bell>(s.source);
      out << "bell(" << bell_name(b.which);
      first = false;
      print_widths(out, b.delta, b.kappa, first);
      out << ')';
    }
  }
  void operator()(const ast::Observable& o) const {
    out << "observable " << o.name << " file=" << quoted_if_needed(o.file);
  }
  void operator()(const ast::Apply& a) const {
    out << "apply " << a.gate;
    if (!a.args.empty()) {
      out << '(';
      for (std::size_t i = 0; i < a.args.size(); ++i) out << (i ? ", " : "") << format_double(a.args[i]);
      out << ')';
    }
    for (const auto& r : a.registers) out << ' ' << r;
  }
  void operator()(const ast::Measure& m) const {
    out << "measure " << measure_name(m.kind);
    for (const auto& t : m.targets) out << ' ' << t;
    for (const auto& r : m.registers) out << ' ' << r;
    if (m.shots) out << " shots=" << *m.shots;
    if (m.seed) out << " seed=" << *m.seed;
    if (m.check.expect) out << " expect=" << format_double(*m.check.expect);
    if (m.check.tol) out << " tol=" << format_double(*m.check.tol);
    if (m.check.min) out << " min=" << format_double(*m.check.min);
    if (m.check.max) out << " max=" << format_double(*m.check.max);
  }
  void operator()(const ast::Dump& d) const {
    out << "dump " << dump_name(d.kind) << ' ' << d.reg;
    if (d.kind == ast::DumpKind::density) out << " phi=" << format_double(d.phi);
    if (d.kind == ast::DumpKind::joint) out << " format=" << (d.binary ? "binary" : "csv");
    out << " file=" << quoted_if_needed(d.file);
  }
};

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

// Flat JSON object with fixed 17-digit number formatting.
class Record {
 public:
  Record& add(const std::string& key, double v) { return raw(key, json_number(v)); }
  Record& add(const std::string& key, std::int64_t v) { return raw(key, std::to_string(v)); }
  Record& add(const std::string& key, const std::string& v) { return raw(key, json_string(v)); }
  Record& add(const std::string& key, const char* v) { return raw(key, json_string(v)); }
  Record& add(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
  Record& add(const std::string& key, const std::vector<double>& v) {
    std::string a = "[";
    for (std::size_t i = 0; i < v.size(); ++i) a += (i ? "," : "") + json_number(v[i]);
    return raw(key, a + "]");
  }
  Record& raw(const std::string& key, const std::string& value) {
    body_ += (body_.empty() ? "" : ",") + json_string(key) + ":" + value;
    return *this;
  }
  [[nodiscard]] std::string str() const { return "{" + body_ + "}"; }

 private:
  std::string body_;
};

std::vector<double> to_vector(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

class Runner {
 public:
  Runner(const RunOptions& options, std::ostream& out) : opt_(options), out_(out) {}

  RunReport run(const CircuitProgram& program) {
    for (std::size_t i = 0; i < program.statements.size(); ++i) {
      line_ = i < program.lines.size() ? program.lines[i] : static_cast<int>(i) + 1;
      try {
        std::visit([this](const auto& st) { exec(st); }, program.statements[i]);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(e.what(), line_, 1);
      }
    }
    return report_;
  }

 private:
  struct System {
    std::variant<WaveFunction1D, WaveFunction2D> state;
    std::vector<std::string> regs;
  };
  struct Location {
    int system;
    int mode;
  };

  void emit(const Record& r) {
    const std::string text = r.str();
    out_ << text << '\n';
    out_.flush();
    report_.records.push_back(text);
  }

  Record start(const char* what, const char* kind) {
    Record r;
    r.add("line", static_cast<std::int64_t>(line_)).add(what, kind);
    return r;
  }

  std::filesystem::path out_path(const std::string& file) const {
    const std::filesystem::path p(file);
    return p.is_absolute() ? p : opt_.out_dir / p;
  }

  const PhaseSpaceObservable& observable(const std::string& name) {
    auto it = observables_.find(name);
    if (it == observables_.end()) {
      it = observables_.emplace(name, builtin_observable(name, grid_)).first;
    }
    return it->second;
  }

  CombParams params(const std::optional<double>& delta, const std::optional<double>& kappa) const {
    CombParams p = default_comb_params(grid_);
    if (delta) p.delta = *delta;
    if (kappa) p.kappa = *kappa;
    if (p.outside_comb_regime(grid_.ell)) {
      std::cerr << "warning: line " << line_ << ": Delta/ell or kappa*ell >= 0.25; the comb is a poor grid state\n";
    }
    return p;
  }

  Location locate(const std::string& reg) const { return where_.at(reg); }

  void add_system(System sys) {
    const int id = next_id_++;
    for (std::size_t m = 0; m < sys.regs.size(); ++m) where_[sys.regs[m]] = {id, static_cast<int>(m)};
    systems_.emplace(id, std::move(sys));
  }

  // --- statements ---

  void exec(const ast::Grid& g) { grid_ = make_grid(g.ell, g.M, g.P); }

  void exec(const ast::State& s) {
    if (const auto* c = std::get_if<ast::Comb>(&s.source)) {
      CombParams p = params(c->delta, c->kappa);
      p.offset = c->offset;
      add_system({gaussian_comb(grid_, p), s.registers});
    } else if (const auto* l = std::get_if<ast::Logical>(&s.source)) {
      add_system({logical_state(grid_, params(l->delta, l->kappa), BlochAngles{l->theta, l->phi}),
                  s.registers});
    } else {
      const auto& b = std::get<ast::Bell>(s.source);
      add_system({bell_logical(grid_, params(b.delta, b.kappa), b.which), s.registers});
    }
  }

  void exec(const ast::Observable& o) {
    std::filesystem::path p(o.file);
    if (p.is_relative()) p = opt_.script_dir / p;
    std::ifstream in(p);
    if (!in) throw Error("cannot read observable file '" + p.string() + "'");
    std::stringstream text;
    text << in.rdbuf();
    PhaseSpaceObservable obs = parse_observable_json(text.str(), grid_);
    obs.name = o.name;
    observables_[o.name] = std::move(obs);
  }

  Gate single_gate(const ast::Apply& a) const {
    if (a.gate == "ROT") {
      const RotationAxis axis(a.args[0], a.args[1], a.args[2]);
      const double angle = a.args[3];
      return {"ROT", [axis, angle](const WaveFunction1D& s) { return rotate(s, axis, angle); }};
    }
    if (a.gate == "D") {
      const Displacement d{a.args[0], a.args[1]};
      return {"D", [d](const WaveFunction1D& s) { return displace(s, d); }};
    }
    return named_gate(a.gate);
  }

  void apply_single(const std::string& reg, const Gate& g) {
    const Location loc = locate(reg);
    System& sys = systems_.at(loc.system);
    if (auto* psi = std::get_if<WaveFunction1D>(&sys.state)) {
      *psi = g(*psi);
    } else {
      auto& joint = std::get<WaveFunction2D>(sys.state);
      joint = apply_to_mode(joint, loc.mode, g.apply);
    }
  }

  static WaveFunction2D swapped(const WaveFunction2D& j) {
    return WaveFunction2D{j.grid2, j.grid1, j.amplitudes.transpose()};
  }

  void exec(const ast::Apply& a) {
    if (a.registers.size() == 1) {
      apply_single(a.registers[0], single_gate(a));
      return;
    }
    const std::string& control = a.registers[0];
    const std::string& target = a.registers[1];
    Location lc = locate(control);
    Location lt = locate(target);
    if (lc.system != lt.system) {
      auto* pc = std::get_if<WaveFunction1D>(&systems_.at(lc.system).state);
      auto* pt = std::get_if<WaveFunction1D>(&systems_.at(lt.system).state);
      if (!pc || !pt) throw Error(a.gate + ": at most two modes can be entangled");
      check_two_mode_size(pc->grid, pt->grid);
      System joint{tensor(*pc, *pt), {control, target}};
      systems_.erase(lc.system);
      systems_.erase(lt.system);
      add_system(std::move(joint));
      lc = locate(control);
      lt = locate(target);
    }
    auto& joint = std::get<WaveFunction2D>(systems_.at(lc.system).state);
    joint = lc.mode == 0 ? cnot(joint) : swapped(cnot(swapped(joint)));
    if (a.gate == "CZ") {
      joint = apply_to_mode(joint, lt.mode, [](const WaveFunction1D& s) { return rescaled_fourier(s); });
    }
  }

  void finish_check(Record& r, double value, const ast::Check& check) {
    if (check.empty()) return;
    bool pass = true;
    if (check.expect) {
      const double tol = check.tol.value_or(opt_.tolerance);
      r.add("expect", *check.expect).add("tol", tol);
      pass = pass && std::abs(value - *check.expect) <= tol;
    }
    if (check.min) {
      r.add("min", *check.min);
      pass = pass && value >= *check.min;
    }
    if (check.max) {
      r.add("max", *check.max);
      pass = pass && value <= *check.max;
    }
    r.add("pass", pass);
    if (!pass) ++report_.failed_checks;
  }

  void exec(const ast::Measure& m) {
    switch (m.kind) {
      case ast::MeasureKind::expectation:
        return measure_expectation(m);
      case ast::MeasureKind::povm:
      case ast::MeasureKind::sample:
        return measure_povm(m);
      case ast::MeasureKind::correlator:
        return measure_correlator(m);
      case ast::MeasureKind::bloch:
        return measure_bloch(m);
    }
  }

  void measure_expectation(const ast::Measure& m) {
    const PhaseSpaceObservable& obs = observable(m.targets[0]);
    const Location loc = locate(m.registers[0]);
    const System& sys = systems_.at(loc.system);
    Record r = start("measure", "expectation");
    r.add("observable", obs.name).add("register", m.registers[0]).add("class", to_string(obs.beta_class));
    double value = 0.0;
    if (const auto* psi = std::get_if<WaveFunction1D>(&sys.state)) {
      value = expectation(*psi, obs);
      r.add("expectation", value);
      if (obs.beta_class != BetaClass::none) {
        r.add("k", k_factor(extract_qubit(zak_transform(*psi)), obs));
      }
    } else {
      value = expectation(std::get<WaveFunction2D>(sys.state), obs, loc.mode);
      r.add("expectation", value);
    }
    finish_check(r, value, m.check);
    emit(r);
  }

  void measure_povm(const ast::Measure& m) {
    const std::string& target = m.targets[0];
    const Gate gate = plain_gates().count(target) != 0 ? named_gate(target)
                                                       : arccos_gate(grid_, observable(target));
    const Location loc = locate(m.registers[0]);
    const System& sys = systems_.at(loc.system);
    double p_plus = 0.0;
    double p_minus = 0.0;
    if (const auto* psi = std::get_if<WaveFunction1D>(&sys.state)) {
      const PovmOutcome o = povm_measure(*psi, gate);
      p_plus = o.p_plus;
      p_minus = o.p_minus;
    } else {
      const auto& joint = std::get<WaveFunction2D>(sys.state);
      const WaveFunction2D moved = apply_to_mode(joint, loc.mode, gate.apply);
      const double n2 = joint.norm_squared();
      p_plus = 0.25 * (joint.amplitudes + moved.amplitudes).squaredNorm() * joint.cell_area() / n2;
      p_minus = 0.25 * (joint.amplitudes - moved.amplitudes).squaredNorm() * joint.cell_area() / n2;
      if (std::abs(p_plus + p_minus - 1.0) > 1e-10) throw Error("povm: gate is not unitary");
    }
    const bool sampled = m.kind == ast::MeasureKind::sample;
    Record r = start("measure", sampled ? "sample" : "povm");
    r.add("gate", gate.name).add("register", m.registers[0]);
    r.add("p_plus", p_plus).add("p_minus", p_minus).add("expectation", p_plus - p_minus);
    double value = p_plus - p_minus;
    if (m.shots) {
      const std::uint64_t seed = m.seed.value_or(0);
      const SampleCounts c = sample_counts(p_plus, *m.shots, seed);
      r.add("shots", *m.shots)
          .raw("counts", "[" + std::to_string(c.plus) + "," + std::to_string(c.minus) + "]")
          .add("seed", static_cast<std::int64_t>(seed))
          .add("estimate", c.estimate())
          .add("standard_error", sampling_standard_error(p_plus, *m.shots));
      if (sampled) value = c.estimate();
    }
    finish_check(r, value, m.check);
    emit(r);
  }

  void measure_correlator(const ast::Measure& m) {
    const PhaseSpaceObservable& o1 = observable(m.targets[0]);
    const PhaseSpaceObservable& o2 = observable(m.targets[1]);
    const Location l1 = locate(m.registers[0]);
    const Location l2 = locate(m.registers[1]);
    double value = 0.0;
    if (l1.system == l2.system) {
      const auto& joint = std::get<WaveFunction2D>(systems_.at(l1.system).state);
      value = l1.mode == 0 ? correlator(joint, o1, o2) : correlator(joint, o2, o1);
    } else {
      const auto* a = std::get_if<WaveFunction1D>(&systems_.at(l1.system).state);
      const auto* b = std::get_if<WaveFunction1D>(&systems_.at(l2.system).state);
      if (!a || !b) {
        // One side belongs to another entangled pair: only its marginal matters.
        throw Error("correlator: registers belong to different entangled pairs");
      }
      value = expectation_quadrature(*a, o1) * expectation_quadrature(*b, o2);
    }
    Record r = start("measure", "correlator");
    r.add("observables", o1.name + "," + o2.name)
        .add("registers", m.registers[0] + "," + m.registers[1])
        .add("correlator", value);
    finish_check(r, value, m.check);
    emit(r);
  }

  void measure_bloch(const ast::Measure& m) {
    const Location loc = locate(m.registers[0]);
    const System& sys = systems_.at(loc.system);
    const PhaseSpaceObservable& ox = observable("ReX");
    const PhaseSpaceObservable& oy = observable("ReY");
    const PhaseSpaceObservable& oz = observable("ReZ");
    Record r = start("measure", "bloch");
    r.add("register", m.registers[0]);
    if (const auto* psi = std::get_if<WaveFunction1D>(&sys.state)) {
      const BlochEstimate b = bloch_estimate(*psi, ox, oy, oz);
      r.add("gamma", to_vector(b.gamma)).add("k", to_vector(b.k)).add("bloch", to_vector(b.bloch));
    } else {
      const auto& joint = std::get<WaveFunction2D>(sys.state);
      r.add("gamma", std::vector<double>{expectation(joint, ox, loc.mode), expectation(joint, oy, loc.mode),
                                         expectation(joint, oz, loc.mode)});
    }
    emit(r);
  }

  void exec(const ast::Dump& d) {
    const Location loc = locate(d.reg);
    const System& sys = systems_.at(loc.system);
    const auto path = out_path(d.file);
    const auto* psi = std::get_if<WaveFunction1D>(&sys.state);
    const auto* joint = std::get_if<WaveFunction2D>(&sys.state);
    switch (d.kind) {
      case ast::DumpKind::density:
        if (psi) {
          write_density_csv(path, *psi, QuadratureAngle(d.phi));
        } else {
          const QuadratureAngle zero(0.0);
          const QuadratureAngle phi(d.phi);
          const RMatrix dens = loc.mode == 0 ? joint_quadrature_density(*joint, phi, zero)
                                             : joint_quadrature_density(*joint, zero, phi);
          const RVector marginal = loc.mode == 0 ? RVector(dens.rowwise().sum() * joint->grid2.dx())
                                                 : RVector(dens.colwise().sum().transpose() * joint->grid1.dx());
          write_density_csv(path, loc.mode == 0 ? joint->grid1 : joint->grid2, phi, marginal);
        }
        break;
      case ast::DumpKind::state:
        if (!psi) throw Error("dump state: register '" + d.reg + "' is entangled; use dump joint");
        write_wavefunction_csv(path, *psi);
        break;
      case ast::DumpKind::modular:
        if (!psi) throw Error("dump modular: register '" + d.reg + "' is entangled");
        write_modular_csv(path, zak_transform(*psi));
        break;
      case ast::DumpKind::joint:
        if (!joint) throw Error("dump joint: register '" + d.reg + "' is not part of a two-mode state");
        if (d.binary) {
          write_two_mode_binary(path, *joint);
        } else {
          write_two_mode_csv(path, *joint);
        }
        break;
    }
    Record r = start("dump", dump_name(d.kind));
    r.add("register", d.reg).add("file", d.file);
    if (d.kind == ast::DumpKind::density) r.add("phi", d.phi);
    emit(r);
  }

  const RunOptions& opt_;
  std::ostream& out_;
  RunReport report_;
  int line_ = 0;
  GridSpec grid_ = default_grid();
  std::map<std::string, PhaseSpaceObservable> observables_;
  std::map<int, System> systems_;
  std::map<std::string, Location> where_;
  int next_id_ = 0;
};

}  // namespace

CircuitProgram parse_program(const std::string& source) { return Parser().parse(source); }

std::string print_program(const CircuitProgram& program) {
  std::ostringstream out;
  for (const auto& st : program.statements) {
    std::visit(Printer{out}, st);
    out << '\n';
  }
  return out.str();
}

RunReport run_program(const CircuitProgram& program, const RunOptions& options, std::ostream& out) {
  return Runner(options, out).run(program);
}

}  // namespace modvar
