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

#include "modvar/grid.hpp"

namespace modvar {

/// State in the modular (Zak) representation on the torus
/// xbar in [-ell/4, 3ell/4) (M points) x pbar in [-pi/ell, pi/ell) (P points).
/// Rows index xbar, columns index pbar. Normalized so that
/// sum |Psi_jk|^2 dxbar dpbar == 1.
struct ModularWaveFunction {
  GridSpec grid;
  CMatrix amplitudes;

  [[nodiscard]] double xbar(Eigen::Index j) const {
    return -grid.ell / 4.0 + static_cast<double>(j) * grid.dx();
  }
  [[nodiscard]] double pbar(Eigen::Index k) const {
    return static_cast<double>(k - grid.period_count / 2) * grid.dp();
  }
  [[nodiscard]] double cell_area() const { return grid.dx() * grid.dp(); }
  [[nodiscard]] double norm_squared() const {
    return amplitudes.squaredNorm() * cell_area();
  }
};

/// Psi(xbar, pbar) = sqrt(ell / 2pi) sum_n psi(n ell + xbar) exp(-i n pbar ell).
/// The continuum prefactor already makes the discrete map exactly unitary.
ModularWaveFunction zak_transform(const WaveFunction1D& psi);
WaveFunction1D inverse_zak(const ModularWaveFunction& mwf);

/// Index of the position sample x = n ell + xbar_j on the cyclic grid.
Eigen::Index zak_position_index(const GridSpec& grid, Eigen::Index j, Eigen::Index n);

enum class QubitSplit {
  // Pairs (xbar, pbar) with (xbar + ell/2, pbar), xbar in [-ell/4, ell/4).
  position,
  // Pairs (xbar, pbar) with (xbar, pbar + pi/ell), pbar in [-pi/2ell, pi/2ell).
  momentum,
};

enum class QubitGauge {
  plain,
  // Fiber basis {exp(-i pbar ell/4)|xbar,pbar>, exp(+i pbar ell/4)|xbar+ell/2,pbar>},
  // in which the fiber operators of the logical Paulis are the textbook ones.
  modified,
};

/// Per-fiber qubit fields: Psi_first = f cos(theta/2),
/// Psi_partner = f exp(i phi) sin(theta/2), in the chosen gauge.
struct LogicalDecomposition {
  GridSpec grid;
  QubitSplit split = QubitSplit::position;
  QubitGauge gauge = QubitGauge::modified;
  CMatrix f;
  RMatrix theta;  // [0, pi]
  RMatrix phi;    // [-pi, pi)

  [[nodiscard]] double cell_area() const { return grid.dx() * grid.dp(); }
};

LogicalDecomposition extract_qubit(const ModularWaveFunction& mwf,
                                   QubitGauge gauge = QubitGauge::modified);
/// Requires P % 4 == 0 so that pbar = +-pi/2ell are grid points.
LogicalDecomposition extract_qubit_momentum(const ModularWaveFunction& mwf);
ModularWaveFunction reconstruct(const LogicalDecomposition& decomp);

}  // namespace modvar
