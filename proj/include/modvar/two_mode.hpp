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

#include <utility>

#include "modvar/grid.hpp"
#include "modvar/states.hpp"

namespace modvar {

/// Default cap on N1 * N2 amplitudes for two-mode states.
inline constexpr std::size_t kMaxTwoModeAmplitudes = std::size_t{1} << 22;

/// Pure two-mode state in position representation. Rows index mode 1,
/// columns mode 2; normalized so sum |a|^2 dx1 dx2 == 1.
struct WaveFunction2D {
  GridSpec grid1;
  GridSpec grid2;
  CMatrix amplitudes;

  [[nodiscard]] double cell_area() const { return grid1.dx() * grid2.dx(); }
  [[nodiscard]] double norm_squared() const { return amplitudes.squaredNorm() * cell_area(); }
};

enum class BellState { phi_plus, phi_minus, psi_plus, psi_minus };

/// Throws when N1 * N2 exceeds `cap`.
void check_two_mode_size(const GridSpec& g1, const GridSpec& g2,
                         std::size_t cap = kMaxTwoModeAmplitudes);

WaveFunction2D tensor(const WaveFunction1D& a, const WaveFunction1D& b);

/// (|0_L 0_L> +- |1_L 1_L>)/sqrt2 or (|0_L 1_L> +- |1_L 0_L>)/sqrt2, renormalized.
WaveFunction2D bell_logical(const GridSpec& grid, const CombParams& params, BellState which);

WaveFunction2D normalized(WaveFunction2D psi);

/// Applies a single-mode map to every row (mode 0) or column (mode 1).
template <class Fn>
WaveFunction2D apply_to_mode(const WaveFunction2D& psi, int mode, Fn&& fn) {
  WaveFunction2D out = psi;
  if (mode == 0) {
    for (Eigen::Index c = 0; c < psi.amplitudes.cols(); ++c) {
      WaveFunction1D slice{psi.grid1, psi.amplitudes.col(c), Representation::position, 0.0};
      out.amplitudes.col(c) = fn(slice).amplitudes;
    }
  } else {
    for (Eigen::Index r = 0; r < psi.amplitudes.rows(); ++r) {
      WaveFunction1D slice{psi.grid2, psi.amplitudes.row(r).transpose(), Representation::position, 0.0};
      out.amplitudes.row(r) = fn(slice).amplitudes.transpose();
    }
  }
  return out;
}

/// p(x1, x2) = |<x1|_phi1 <x2|_phi2 |psi>|^2 on the grid.
RMatrix joint_quadrature_density(const WaveFunction2D& psi, QuadratureAngle phi1,
                                 QuadratureAngle phi2);

/// Position density of one mode, integrating out the other.
RVector marginal_density(const WaveFunction2D& psi, int mode);

/// sum_j conj(a_j) psi(j, .) dx1: the mode-2 vector left after projecting mode 1 on a.
CVector partial_overlap(const WaveFunction1D& a, const WaveFunction2D& psi);

/// |<chi|psi>|^2 for two-mode states on the same grids.
double fidelity(const WaveFunction2D& a, const WaveFunction2D& b);

}  // namespace modvar
