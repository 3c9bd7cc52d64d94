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

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace modvar {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Errors caused by caller input (bad grids, incommensurate shifts, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical self-check failed. Indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace tol {
inline constexpr double kUnitarity = 1e-12;
inline constexpr double kAlgebraic = 1e-10;
inline constexpr double kFractionalFourier = 1e-8;
// Below this modulus a qubit fiber is treated as empty.
inline constexpr double kDegenerate = 1e-14;
}  // namespace tol

/// Largest single-mode grid accepted by make_grid.
inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 22;

/// Uniform cyclic position grid holding `period_count` periods of length
/// `ell`, each sampled with `points_per_period` points.
///
/// Position samples are x_j = (j - N/2) dx, momentum samples p_k = (k - N/2) dp
/// with dx dp N = 2 pi. With M % 4 == 0 and P even, x = 0, +-ell/4, +-ell/2 and
/// p = +-pi/ell, +-2 pi/ell all fall on grid points.
struct GridSpec {
  double ell = 0.0;
  int points_per_period = 0;
  int period_count = 0;

  [[nodiscard]] Eigen::Index size() const {
    return static_cast<Eigen::Index>(points_per_period) * period_count;
  }
  [[nodiscard]] double dx() const { return ell / points_per_period; }
  [[nodiscard]] double dp() const { return kTwoPi / (ell * period_count); }
  [[nodiscard]] double position(Eigen::Index j) const {
    return static_cast<double>(j - size() / 2) * dx();
  }
  [[nodiscard]] double momentum(Eigen::Index k) const {
    return static_cast<double>(k - size() / 2) * dp();
  }
  [[nodiscard]] RVector positions() const;
  [[nodiscard]] RVector momenta() const;
  /// True when dx == dp, i.e. ell^2 = 2 pi M / P. Rotated quadratures and the
  /// rescaled Fourier transform stay on the same grid only in this case.
  [[nodiscard]] bool symmetric() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

GridSpec make_grid(double ell, int points_per_period, int period_count);

enum class Representation { position, momentum, quadrature };

/// Pure single-mode state sampled on a GridSpec. Normalized so that
/// sum |a_j|^2 * spacing() == 1.
struct WaveFunction1D {
  GridSpec grid;
  CVector amplitudes;
  Representation rep = Representation::position;
  // Quadrature angle of the sampling axis; meaningful for rep == quadrature.
  double angle = 0.0;

  [[nodiscard]] double spacing() const;
  [[nodiscard]] double norm_squared() const {
    return amplitudes.squaredNorm() * spacing();
  }
};

/// Angle of the quadrature x_phi = cos(phi) x + sin(phi) p, kept in [0, 2 pi).
class QuadratureAngle {
 public:
  QuadratureAngle() = default;
  explicit QuadratureAngle(double radians);
  [[nodiscard]] double radians() const { return radians_; }

 private:
  double radians_ = 0.0;
};

/// Wraps raw amplitudes in position representation without normalizing.
WaveFunction1D make_wavefunction(const GridSpec& grid, CVector amplitudes);
/// Rescales to unit norm. Throws on a zero vector.
WaveFunction1D normalized(WaveFunction1D psi);

WaveFunction1D to_momentum(const WaveFunction1D& psi);
WaveFunction1D from_momentum(const WaveFunction1D& psi);

/// Order-phi fractional Fourier transform. The output's squared modulus is the
/// density of x_phi. phi = 0 is the identity and phi = pi/2 equals
/// to_momentum. Other angles than multiples of pi/2 need a symmetric grid.
WaveFunction1D fractional_fourier(const WaveFunction1D& psi, QuadratureAngle angle);

/// Exact inverse of fractional_fourier: maps a quadrature-representation state
/// back to position space with the same discrete steps undone in reverse order.
WaveFunction1D from_quadrature(const WaveFunction1D& psi);

/// p_phi(x_j) = |<x_j|_phi |psi>|^2 sampled on the grid.
RVector quadrature_density(const WaveFunction1D& psi, QuadratureAngle angle);

/// <a|b> with the Riemann measure of the shared representation.
Complex overlap(const WaveFunction1D& a, const WaveFunction1D& b);

/// |<a|b>|^2.
double fidelity(const WaveFunction1D& a, const WaveFunction1D& b);

namespace detail {
/// Unitary centered DFT: out_k = N^{-1/2} sum_j in_j exp(-+ 2 pi i (j-N/2)(k-N/2)/N).
CVector centered_dft(const CVector& in, bool inverse = false);
/// out_j = in_{-j mod N} about the center sample (x -> -x).
CVector parity(const CVector& in);
void require_position(const WaveFunction1D& psi, const char* what);
}  // namespace detail

}  // namespace modvar
