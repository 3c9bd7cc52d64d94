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

// modvar: run circuit scripts, self-check the invariant suite, print observables.
//
// Exit codes: 0 success, 1 user error (bad script, failed check, bad input),
// 2 internal assertion.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modvar/circuit.hpp"
#include "modvar/io.hpp"
#include "modvar/readout.hpp"
#include "modvar/selfcheck.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUserError = 1;
constexpr int kInternal = 2;

void error_record(const std::string& kind, const std::string& message, int line = 0, int column = 0) {
  nlohmann::ordered_json rec;
  rec["error"] = kind;
  rec["message"] = message;
  if (line > 0) {
    rec["line"] = line;
    rec["column"] = column;
  }
  std::cout << rec.dump() << '\n';
  std::cerr << "modvar: " << message << '\n';
}

int run_script(const std::string& script, const std::string& out_dir, double tolerance) {
  std::ifstream in(script);
  if (!in) {
    error_record("io", "cannot read script '" + script + "'");
    return kUserError;
  }
  std::stringstream text;
  text << in.rdbuf();

  modvar::RunOptions options;
  options.out_dir = out_dir;
  options.script_dir = std::filesystem::path(script).parent_path();
  if (options.script_dir.empty()) options.script_dir = ".";
  options.tolerance = tolerance;

  std::filesystem::create_directories(options.out_dir);
  std::ofstream report(options.out_dir / "report.jsonl");
  try {
    const modvar::CircuitProgram program = modvar::parse_program(text.str());
    const modvar::RunReport result = modvar::run_program(program, options, std::cout);
    for (const auto& r : result.records) report << r << '\n';
    if (result.failed_checks > 0) {
      std::cerr << "modvar: " << result.failed_checks << " check(s) failed\n";
      return kUserError;
    }
    return kOk;
  } catch (const modvar::ParseError& e) {
    error_record("script", e.what(), e.line(), e.column());
    return kUserError;
  } catch (const modvar::Error& e) {
    error_record("runtime", e.what());
    return kUserError;
  } catch (const modvar::InternalError& e) {
    error_record("internal", e.what());
    return kInternal;
  }
}

int check_suite() {
  bool ok = true;
  for (const auto& r : modvar::run_invariant_suite()) {
    std::cout << (r.pass() ? "PASS " : "FAIL ") << r.name << "  residual=" << modvar::format_double(r.residual)
              << "  tolerance=" << modvar::format_double(r.tolerance) << '\n';
    ok = ok && r.pass();
  }
  return ok ? kOk : kInternal;
}

int dump_observable(const std::string& name, double ell, int M, int P) {
  const modvar::GridSpec grid = modvar::make_grid(ell, M, P);
  std::cout << modvar::observable_to_json(modvar::builtin_observable(name, grid)) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modvar: modular-variable simulator for grid-state qubits"};
  app.require_subcommand(1);

  std::string script;
  std::string out_dir = ".";
  double tolerance = 1e-6;
  auto* run = app.add_subcommand("run", "Run a circuit script");
  run->add_option("script", script, "Script file")->required();
  run->add_option("--out-dir", out_dir, "Directory for dumps and report.jsonl");
  run->add_option("--tolerance", tolerance, "Tolerance for expect= checks without tol=")
      ->check(CLI::NonNegativeNumber);

  auto* check = app.add_subcommand("check", "Run the built-in invariant suite");

  std::string name;
  const modvar::GridSpec def = modvar::default_grid();
  double ell = def.ell;
  int M = def.points_per_period;
  int P = def.period_count;
  auto* dump = app.add_subcommand("dump-observable", "Print a built-in observable as JSON");
  dump->add_option("name", name, "ReX ReY ReZ G1X G1Y G1Z")->required();
  dump->add_option("--ell", ell, "Lattice length");
  dump->add_option("-M", M, "Points per period");
  dump->add_option("-P", P, "Number of periods");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUserError;
  }

  try {
    if (*run) return run_script(script, out_dir, tolerance);
    if (*check) return check_suite();
    if (*dump) return dump_observable(name, ell, M, P);
  } catch (const modvar::Error& e) {
    error_record("user", e.what());
    return kUserError;
  } catch (const std::exception& e) {
    error_record("internal", e.what());
    return kInternal;
  }
  return kInternal;
}
