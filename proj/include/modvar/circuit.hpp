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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "modvar/grid.hpp"
#include "modvar/states.hpp"
#include "modvar/two_mode.hpp"

namespace modvar {

/// Syntax or semantic error in a script, with 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int column() const { return column_; }
  [[nodiscard]] const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

namespace ast {

struct Grid {
  double ell = 0.0;
  int M = 0;
  int P = 0;
  bool operator==(const Grid&) const = default;
};

struct Comb {
  std::optional<double> delta;
  std::optional<double> kappa;
  CombOffset offset = CombOffset::zero;
  bool operator==(const Comb&) const = default;
};

struct Logical {
  double theta = 0.0;
  double phi = 0.0;
  std::optional<double> delta;
  std::optional<double> kappa;
  bool operator==(const Logical&) const = default;
};

struct Bell {
  BellState which = BellState::phi_plus;
  std::optional<double> delta;
  std::optional<double> kappa;
  bool operator==(const Bell&) const = default;
};

/// `state q0 = comb(...)`, `state q0 = logical(...)`, `state q0 q1 = bell(...)`.
struct State {
  std::vector<std::string> registers;
  std::variant<Comb, Logical, Bell> source;
  bool operator==(const State&) const = default;
};

/// `observable NAME file=PATH` (JSON coefficient table).
struct Observable {
  std::string name;
  std::string file;
  bool operator==(const Observable&) const = default;
};

/// `apply GATE[(args)] reg [reg]`.
struct Apply {
  std::string gate;
  std::vector<double> args;
  std::vector<std::string> registers;
  bool operator==(const Apply&) const = default;
};

enum class MeasureKind { expectation, povm, sample, correlator, bloch };

/// Checks attached to a measurement: `expect=V [tol=T]`, `min=A`, `max=B`.
struct Check {
  std::optional<double> expect;
  std::optional<double> tol;
  std::optional<double> min;
  std::optional<double> max;
  bool operator==(const Check&) const = default;
  [[nodiscard]] bool empty() const { return !expect && !min && !max; }
};

/// `measure expectation OBS reg`, `measure povm GATE|OBS reg [shots=N seed=S]`,
/// `measure sample GATE|OBS reg shots=N seed=S`,
/// `measure correlator OBS1 OBS2 reg1 reg2`, `measure bloch reg`.
struct Measure {
  MeasureKind kind = MeasureKind::expectation;
  std::vector<std::string> targets;  // observable or gate names
  std::vector<std::string> registers;
  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> seed;
  Check check;
  bool operator==(const Measure&) const = default;
};

enum class DumpKind { density, state, modular, joint };

/// `dump density reg phi=E file=F`, `dump state|modular reg file=F`,
/// `dump joint reg file=F [format=csv|binary]`.
struct Dump {
  DumpKind kind = DumpKind::density;
  std::string reg;
  double phi = 0.0;
  std::string file;
  bool binary = false;
  bool operator==(const Dump&) const = default;
};

using Statement = std::variant<Grid, State, Observable, Apply, Measure, Dump>;

}  // namespace ast

struct CircuitProgram {
  std::vector<ast::Statement> statements;
  std::vector<int> lines;  // source line of each statement (not part of equality)

  bool operator==(const CircuitProgram& other) const { return statements == other.statements; }
};

/// Default grid when a script has no `grid` line: ell = 2 sqrt(pi), M = 64, P = 32.
GridSpec default_grid();

CircuitProgram parse_program(const std::string& source);
/// Canonical text; parse_program(print_program(p)) == p.
std::string print_program(const CircuitProgram& program);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::filesystem::path script_dir = ".";
  double tolerance = 1e-6;  // for `expect=` without `tol=`
};

struct RunReport {
  std::vector<std::string> records;  // one JSON object per measurement / dump
  int failed_checks = 0;
};

/// Executes statements in order, streaming each JSON record to `out` as it is
/// produced. Failed checks are recorded, not thrown.
RunReport run_program(const CircuitProgram& program, const RunOptions& options, std::ostream& out);

}  // namespace modvar
