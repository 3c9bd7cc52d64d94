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

#include "modvar/two_mode.hpp"

#include <cmath>

namespace modvar {

void check_two_mode_size(const GridSpec& g1, const GridSpec& g2, std::size_t cap) {
  const auto total = static_cast<std::size_t>(g1.size()) * static_cast<std::size_t>(g2.size());
  if (total > cap) {
    throw Error("two-mode: N1*N2 exceeds the amplitude cap");
  }
}

WaveFunction2D tensor(const WaveFunction1D& a, const WaveFunction1D& b) {
  detail::require_position(a, "tensor");
  detail::require_position(b, "tensor");
  check_two_mode_size(a.grid, b.grid);
  return WaveFunction2D{a.grid, b.grid, a.amplitudes * b.amplitudes.transpose()};
}

WaveFunction2D normalized(WaveFunction2D psi) {
  const double n2 = psi.norm_squared();
  if (!(n2 > 0.0)) throw Error("two-mode: cannot normalize a zero state");
  psi.amplitudes /= std::sqrt(n2);
  return psi;
}

WaveFunction2D bell_logical(const GridSpec& grid, const CombParams& params, BellState which) {
  check_two_mode_size(grid, grid);
  CombParams p0 = params;
  p0.offset = CombOffset::zero;
  CombParams p1 = params;
  p1.offset = CombOffset::half;
  const CVector zero = gaussian_comb(grid, p0).amplitudes;
  const CVector one = gaussian_comb(grid, p1).amplitudes;
  CMatrix amp;
  switch (which) {
    case BellState::phi_plus:
      amp = zero * zero.transpose() + one * one.transpose();
      break;
    case BellState::phi_minus:
      amp = zero * zero.transpose() - one * one.transpose();
      break;
    case BellState::psi_plus:
      amp = zero * one.transpose() + one * zero.transpose();
      break;
    case BellState::psi_minus:
      amp = zero * one.transpose() - one * zero.transpose();
      break;
  }
  return normalized(WaveFunction2D{grid, grid, std::move(amp)});
}

RMatrix joint_quadrature_density(const WaveFunction2D& psi, QuadratureAngle phi1,
                                 QuadratureAngle phi2) {
  auto rotate1 = [&](const WaveFunction1D& s) { return fractional_fourier(s, phi1); };
  auto rotate2 = [&](const WaveFunction1D& s) { return fractional_fourier(s, phi2); };
  const WaveFunction2D rotated = apply_to_mode(apply_to_mode(psi, 0, rotate1), 1, rotate2);
  return rotated.amplitudes.cwiseAbs2();
}

RVector marginal_density(const WaveFunction2D& psi, int mode) {
  const RMatrix dens = psi.amplitudes.cwiseAbs2();
  if (mode == 0) return dens.rowwise().sum() * psi.grid2.dx();
  return dens.colwise().sum().transpose() * psi.grid1.dx();
}

CVector partial_overlap(const WaveFunction1D& a, const WaveFunction2D& psi) {
  if (!(a.grid == psi.grid1)) throw Error("partial_overlap: grid mismatch");
  return (a.amplitudes.adjoint() * psi.amplitudes).transpose() * a.grid.dx();
}

double fidelity(const WaveFunction2D& a, const WaveFunction2D& b) {
  if (!(a.grid1 == b.grid1) || !(a.grid2 == b.grid2)) throw Error("fidelity: grid mismatch");
  const Complex ov = (a.amplitudes.conjugate().cwiseProduct(b.amplitudes)).sum() * a.cell_area();
  return std::norm(ov);
}

}  // namespace modvar
