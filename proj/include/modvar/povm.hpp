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
#include <functional>
#include <optional>
#include <string>

#include "modvar/grid.hpp"
#include "modvar/readout.hpp"

namespace modvar {

/// A named single-mode unitary.
struct Gate {
  std::string name;
  std::function<WaveFunction1D(const WaveFunction1D&)> apply;

  WaveFunction1D operator()(const WaveFunction1D& psi) const { return apply(psi); }
};

/// Gate from the operator set: I, X, Y, Z (and Xdag, Ydag, Zdag), S, Sdag, F,
/// Fdag, G1X, G1Y, G1Z.
Gate named_gate(const std::string& name);

/// exp(i h(x_phi)) applied diagonally in the rotated quadrature, with h sampled
/// on the grid of that quadrature.
Gate phase_gate(const GridSpec& grid, RVector h, QuadratureAngle angle);
/// Same with h given as a function of the quadrature value.
Gate phase_gate(const GridSpec& grid, const std::function<double(double)>& h, QuadratureAngle angle);

/// exp(i arccos F(x_phi)) for a quadrature-diagonal observable; p+ - p- then
/// equals <F>. Values of F beyond +-1 by at most 1e-9 are clamped.
Gate arccos_gate(const GridSpec& grid, const PhaseSpaceObservable& obs);

struct PovmOutcome {
  double p_plus = 0.0;
  double p_minus = 0.0;
  // Empty when the branch probability is below 1e-14.
  std::optional<WaveFunction1D> post_plus;
  std::optional<WaveFunction1D> post_minus;
  double expectation = 0.0;  // p_plus - p_minus == Re <psi|U|psi>
};

/// Ancilla interferometer: (1 + U)/2 |psi>|0> + (1 - U)/2 |psi>|1>.
PovmOutcome povm_measure(const WaveFunction1D& psi, const Gate& u);

struct SampleCounts {
  std::int64_t plus = 0;
  std::int64_t minus = 0;

  [[nodiscard]] double estimate() const {
    return static_cast<double>(plus - minus) / static_cast<double>(plus + minus);
  }
};

/// Bernoulli(p_plus) draws with a fixed-seed mt19937_64 stream.
SampleCounts sample_counts(double p_plus, std::int64_t shots, std::uint64_t seed);
SampleCounts sample_outcomes(const WaveFunction1D& psi, const Gate& u, std::int64_t shots,
                             std::uint64_t seed);

/// sqrt(p+ p- / shots) scaled to the +-1 estimator: 2 sqrt(p+ p- / shots).
double sampling_standard_error(double p_plus, std::int64_t shots);

}  // namespace modvar
