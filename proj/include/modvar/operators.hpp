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

#include <array>

#include "modvar/grid.hpp"
#include "modvar/two_mode.hpp"

namespace modvar {

/// Phase-space displacement D(dx, dp) = exp(i dp x - i dx p). Both shifts must
/// be whole multiples of the grid spacings.
struct Displacement {
  double dx = 0.0;
  double dp = 0.0;
};

/// Unit rotation axis on the Bloch sphere.
class RotationAxis {
 public:
  /// Throws unless |n| == 1 within 1e-12.
  RotationAxis(double nx, double ny, double nz);
  /// Normalizes any non-zero vector.
  static RotationAxis normalized(double nx, double ny, double nz);
  [[nodiscard]] const Eigen::Vector3d& vector() const { return n_; }

 private:
  explicit RotationAxis(const Eigen::Vector3d& n) : n_(n) {}
  Eigen::Vector3d n_;
};

enum class Pauli { x, y, z };
enum class StepAxis { x, z };

/// exp(i dp x) exp(-i dx p) exp(-i dx dp / 2): cyclic shift by dx, then a
/// position phase ramp.
WaveFunction1D displace(const WaveFunction1D& psi, const Displacement& d);

/// Z = exp(2 pi i x / ell), X = exp(-i p ell/2), Y = D^dagger(ell/2, 2 pi/ell).
/// `adjoint` applies the Hermitian conjugate instead.
WaveFunction1D logical_pauli(const WaveFunction1D& psi, Pauli which, bool adjoint = false);
inline WaveFunction1D logical_X(const WaveFunction1D& psi) { return logical_pauli(psi, Pauli::x); }
inline WaveFunction1D logical_Y(const WaveFunction1D& psi) { return logical_pauli(psi, Pauli::y); }
inline WaveFunction1D logical_Z(const WaveFunction1D& psi) { return logical_pauli(psi, Pauli::z); }

/// Length d = ell / (2 sqrt(pi)) used by the Clifford gates.
double clifford_length(const GridSpec& grid);

/// Phase gate exp(i x^2 / (2 d^2)) (or its inverse).
WaveFunction1D shear(const WaveFunction1D& psi, bool inverse = false);

/// exp(i pi/4 (x^2/d^2 + p^2 d^2)) without its constant zero-point phase, so
/// that F^4 == 1. Requires dx == dp d^2, which holds exactly when M == 2P.
WaveFunction1D rescaled_fourier(const WaveFunction1D& psi, bool inverse = false);

/// Square-wave involutions: axis z multiplies by the ell-periodic s_z(x),
/// axis x by the 4pi/ell-periodic s_x(p) in momentum space.
WaveFunction1D gamma1_step(const WaveFunction1D& psi, StepAxis axis);
/// i Gamma1_x Gamma1_z.
WaveFunction1D gamma1_y(const WaveFunction1D& psi);
/// (n . Gamma1) psi.
WaveFunction1D gamma1_dot(const WaveFunction1D& psi, const RotationAxis& axis);

/// cos(angle/2) psi + i sin(angle/2) (n . Gamma1) psi.
WaveFunction1D rotate(const WaveFunction1D& psi, const RotationAxis& axis, double angle);

/// exp(-i x_a p_b): mode b is translated by x_a for every sample of mode a.
/// Needs dx_a / dx_b to be an integer.
WaveFunction2D cnot(const WaveFunction2D& joint, bool inverse = false);

/// CNOT followed by the rescaled Fourier transform on mode b.
WaveFunction2D controlled_z(const WaveFunction2D& joint);

namespace detail {
/// +1 / -1 value of s_z at grid sample i.
int step_z(const GridSpec& grid, Eigen::Index i);
/// +1 / -1 value of s_x at momentum sample k.
int step_x(const GridSpec& grid, Eigen::Index k);
/// Integer number of grid steps in `shift`, or throws.
Eigen::Index commensurate_steps(double shift, double spacing, const char* what);
}  // namespace detail

}  // namespace modvar
