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
#include <string>
#include <vector>

namespace modvar {

struct InvariantResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  [[nodiscard]] bool pass() const { return residual <= tolerance; }
};

/// Quick invariant checks on random states at the default grid: Zak
/// round trip, Pauli algebra, Z^2 invisibility, Bloch bound, the three
/// expectation paths, Clifford conjugation and POVM consistency.
std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed = 2026, int states = 10);

}  // namespace modvar
