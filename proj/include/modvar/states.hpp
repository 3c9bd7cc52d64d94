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

#include <optional>

#include "modvar/grid.hpp"
#include "modvar/random.hpp"

namespace modvar {

enum class CombOffset { zero, half };

/// Gaussian comb: spikes of width `delta` spaced by the grid's ell under a
/// Gaussian envelope exp(-(x kappa)^2 / 2).
struct CombParams {
  double delta = 0.0;
  double kappa = 0.0;
  CombOffset offset = CombOffset::zero;

  /// Flags the regime where the comb no longer resembles a grid state
  /// (delta/ell >= 0.25 or kappa*ell >= 0.25). Advisory only.
  [[nodiscard]] bool outside_comb_regime(double ell) const {
    return delta / ell >= 0.25 || kappa * ell >= 0.25;
  }
};

struct BlochAngles {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [-pi, pi)
};

/// Dimensionless defaults: delta = 0.05 ell, kappa = 0.05 / ell.
CombParams default_comb_params(const GridSpec& grid);

WaveFunction1D gaussian_comb(const GridSpec& grid, const CombParams& params);

/// cos(theta/2)|0_L> + exp(i phi) sin(theta/2)|1_L>, renormalized. The comb
/// offset in `params` is ignored.
WaveFunction1D logical_state(const GridSpec& grid, const CombParams& params,
                             const BlochAngles& angles);

/// <0_L|1_L> of the two normalized combs; zero for ideal grid states.
Complex logical_basis_overlap(const GridSpec& grid, const CombParams& params);

/// Gaussian beam exp(-(x kappa)^2/2) behind a grating with transmission
/// sum_m a_m exp(i m x 2pi/L), a_m = exp(-m^2 (2 pi delta / L)^2 / 2).
/// The series stops at the first order with a_m < 1e-12 unless `max_order`
/// caps it earlier.
WaveFunction1D grating_output(const GridSpec& grid, double kappa, double slit_width,
                              double slit_distance,
                              std::optional<int> max_order = std::nullopt);

/// Sum of a few random Gaussian wave packets kept well inside the phase-space
/// window of the grid, so every transform in the library resolves them.
WaveFunction1D random_state(const GridSpec& grid, Rng& rng, int packets = 3);

/// Random Bloch angles, uniform on the sphere.
BlochAngles random_bloch_angles(Rng& rng);

}  // namespace modvar
