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

#include "modvar/operators.hpp"

#include <cmath>
#include <sstream>

namespace modvar {

namespace detail {

Eigen::Index commensurate_steps(double shift, double spacing, const char* what) {
  const double steps = shift / spacing;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps))) {
    std::ostringstream msg;
    msg << what << ": shift " << shift << " is not a multiple of the grid spacing " << spacing;
    throw Error(msg.str());
  }
  return static_cast<Eigen::Index>(rounded);
}

int step_z(const GridSpec& grid, Eigen::Index i) {
  const Eigen::Index per = grid.points_per_period;
  Eigen::Index r = (i - grid.size() / 2 + per / 4) % per;
  if (r < 0) r += per;
  return r < per / 2 ? 1 : -1;
}

int step_x(const GridSpec& grid, Eigen::Index k) {
  const Eigen::Index periods = grid.period_count;
  Eigen::Index r = (k - grid.size() / 2 + periods / 2) % (2 * periods);
  if (r < 0) r += 2 * periods;
  return r < periods ? 1 : -1;
}

}  // namespace detail

RotationAxis::RotationAxis(double nx, double ny, double nz) : n_(nx, ny, nz) {
  if (std::abs(n_.norm() - 1.0) > 1e-12) {
    throw Error("rotation axis must have unit norm");
  }
}

RotationAxis RotationAxis::normalized(double nx, double ny, double nz) {
  const Eigen::Vector3d n(nx, ny, nz);
  if (!(n.norm() > 0.0)) throw Error("rotation axis must be non-zero");
  return RotationAxis(Eigen::Vector3d(n / n.norm()));
}

WaveFunction1D displace(const WaveFunction1D& psi, const Displacement& d) {
  detail::require_position(psi, "displace");
  const GridSpec& grid = psi.grid;
  const Eigen::Index steps = detail::commensurate_steps(d.dx, grid.dx(), "displace");
  detail::commensurate_steps(d.dp, grid.dp(), "displace");
  const Eigen::Index size = grid.size();
  const Complex weyl = std::polar(1.0, -d.dx * d.dp / 2.0);
  CVector out(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    Eigen::Index src = (i - steps) % size;
    if (src < 0) src += size;
    out[i] = psi.amplitudes[src] * std::polar(1.0, d.dp * grid.position(i)) * weyl;
  }
  return WaveFunction1D{grid, std::move(out), Representation::position, 0.0};
}

WaveFunction1D logical_pauli(const WaveFunction1D& psi, Pauli which, bool adjoint) {
  const double ell = psi.grid.ell;
  const double sign = adjoint ? -1.0 : 1.0;
  switch (which) {
    case Pauli::z:
      return displace(psi, {0.0, sign * kTwoPi / ell});
    case Pauli::x:
      return displace(psi, {sign * ell / 2.0, 0.0});
    case Pauli::y:
      return displace(psi, {-sign * ell / 2.0, -sign * kTwoPi / ell});
  }
  return psi;
}

double clifford_length(const GridSpec& grid) { return grid.ell / (2.0 * std::sqrt(kPi)); }

WaveFunction1D shear(const WaveFunction1D& psi, bool inverse) {
  detail::require_position(psi, "shear");
  const double d = clifford_length(psi.grid);
  const double sign = inverse ? -1.0 : 1.0;
  WaveFunction1D out = psi;
  for (Eigen::Index i = 0; i < psi.grid.size(); ++i) {
    const double x = psi.grid.position(i);
    out.amplitudes[i] *= std::polar(1.0, sign * x * x / (2.0 * d * d));
  }
  return out;
}

WaveFunction1D rescaled_fourier(const WaveFunction1D& psi, bool inverse) {
  detail::require_position(psi, "rescaled_fourier");
  const GridSpec& grid = psi.grid;
  const double d = clifford_length(grid);
  if (std::abs(grid.dx() - grid.dp() * d * d) > 1e-12 * grid.dx()) {
    throw Error("rescaled_fourier: grid is not commensurate with d^2 (needs M == 2P)");
  }
  // The operator maps x -> p d^2 and p -> -x/d^2, i.e. an inverse DFT in units of d.
  return WaveFunction1D{grid, detail::centered_dft(psi.amplitudes, /*inverse=*/!inverse),
                        Representation::position, 0.0};
}

WaveFunction1D gamma1_step(const WaveFunction1D& psi, StepAxis axis) {
  detail::require_position(psi, "gamma1_step");
  const GridSpec& grid = psi.grid;
  if (axis == StepAxis::z) {
    WaveFunction1D out = psi;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      if (detail::step_z(grid, i) < 0) out.amplitudes[i] = -out.amplitudes[i];
    }
    return out;
  }
  WaveFunction1D mom = to_momentum(psi);
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    if (detail::step_x(grid, k) < 0) mom.amplitudes[k] = -mom.amplitudes[k];
  }
  return from_momentum(mom);
}

WaveFunction1D gamma1_y(const WaveFunction1D& psi) {
  WaveFunction1D out = gamma1_step(gamma1_step(psi, StepAxis::z), StepAxis::x);
  out.amplitudes *= kI;
  return out;
}

WaveFunction1D gamma1_dot(const WaveFunction1D& psi, const RotationAxis& axis) {
  const Eigen::Vector3d& n = axis.vector();
  CVector acc = CVector::Zero(psi.amplitudes.size());
  if (n.x() != 0.0) acc += n.x() * gamma1_step(psi, StepAxis::x).amplitudes;
  if (n.y() != 0.0) acc += n.y() * gamma1_y(psi).amplitudes;
  if (n.z() != 0.0) acc += n.z() * gamma1_step(psi, StepAxis::z).amplitudes;
  return WaveFunction1D{psi.grid, std::move(acc), Representation::position, 0.0};
}

WaveFunction1D rotate(const WaveFunction1D& psi, const RotationAxis& axis, double angle) {
  detail::require_position(psi, "rotate");
  WaveFunction1D out = gamma1_dot(psi, axis);
  out.amplitudes = std::cos(angle / 2.0) * psi.amplitudes +
                   kI * std::sin(angle / 2.0) * out.amplitudes;
  return out;
}

WaveFunction2D cnot(const WaveFunction2D& joint, bool inverse) {
  const GridSpec& ga = joint.grid1;
  const GridSpec& gb = joint.grid2;
  const Eigen::Index ratio = detail::commensurate_steps(ga.dx(), gb.dx(), "cnot");
  const Eigen::Index nb = gb.size();
  WaveFunction2D out = joint;
  for (Eigen::Index a = 0; a < ga.size(); ++a) {
    Eigen::Index steps = (a - ga.size() / 2) * ratio;
    if (inverse) steps = -steps;
    for (Eigen::Index b = 0; b < nb; ++b) {
      Eigen::Index src = (b - steps) % nb;
      if (src < 0) src += nb;
      out.amplitudes(a, b) = joint.amplitudes(a, src);
    }
  }
  return out;
}

WaveFunction2D controlled_z(const WaveFunction2D& joint) {
  return apply_to_mode(cnot(joint), 1,
                       [](const WaveFunction1D& s) { return rescaled_fourier(s); });
}

}  // namespace modvar
