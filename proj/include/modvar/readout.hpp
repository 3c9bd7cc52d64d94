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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modvar/grid.hpp"
#include "modvar/modular.hpp"
#include "modvar/operators.hpp"
#include "modvar/two_mode.hpp"

namespace modvar {

enum class BetaClass { none, x, y, z };

const char* to_string(BetaClass beta);

/// Periodic phase-space observable
///   F = sum_{n,m} d_{n,m} D(Lp m, 2 pi n / L),
/// or, when `step` is set, one of the square-wave involutions Gamma1
/// (whose Fourier tables are infinite).
struct PhaseSpaceObservable {
  using Index = std::pair<int, int>;  // (n, m)

  std::string name;
  std::map<Index, Complex> coeffs;
  double L = 0.0;
  double Lp = 0.0;
  std::optional<Pauli> step;
  BetaClass beta_class = BetaClass::none;

  /// Sum of |d|. The spectrum of F is bounded by it.
  [[nodiscard]] double coefficient_l1() const;
  /// Sum of |d|^2.
  [[nodiscard]] double coefficient_l2() const;
};

/// Drops |d| < 1e-14 and validates the table: finite periods, Hermiticity
/// d_{-n,-m} == conj(d_{n,m}) and sum |d| <= 1.
PhaseSpaceObservable make_observable(std::string name, std::map<PhaseSpaceObservable::Index, Complex> coeffs,
                                     double L, double Lp);

/// ReX, ReY, ReZ, G1X, G1Y, G1Z, certified on `grid`.
PhaseSpaceObservable builtin_observable(const std::string& name, const GridSpec& grid);
const std::vector<std::string>& builtin_observable_names();

/// Parses {"L":..., "Lp":..., "coeffs":[[n,m,re,im],...], "name": optional}.
/// Lengths may be numbers or strings using `ell` (e.g. "ell/2").
PhaseSpaceObservable parse_observable_json(const std::string& text, const GridSpec& grid);
std::string observable_to_json(const PhaseSpaceObservable& obs);

/// 2x2 operator of F on the fiber (xbar_j, pbar_k), j < M/2, in the modified
/// logical basis. Throws when a term leaves the fiber.
Eigen::Matrix2cd fiber_matrix(const PhaseSpaceObservable& obs, const GridSpec& grid,
                              Eigen::Index j, Eigen::Index k);

/// z / x / y when every fiber matrix is zeta * sigma_beta with real zeta.
BetaClass certify_class(const PhaseSpaceObservable& obs, const GridSpec& grid);
/// Returns a copy with beta_class filled in.
PhaseSpaceObservable certified(PhaseSpaceObservable obs, const GridSpec& grid);

/// zeta(xbar_j, pbar_k) on the half torus, (M/2) x P.
RMatrix zeta_function(const PhaseSpaceObservable& obs, const GridSpec& grid);

/// <psi|F|psi> from displaced, phase-shifted copies of psi.
double expectation(const WaveFunction1D& psi, const PhaseSpaceObservable& obs);

/// <Psi|F (x) 1|Psi> (mode 0) or <Psi|1 (x) F|Psi> (mode 1).
double expectation(const WaveFunction2D& joint, const PhaseSpaceObservable& obs, int mode);

/// The same value from the qubit fields of the modular representation:
/// sum zeta |f|^2 (sin th cos ph | sin th sin ph | cos th) dxbar dpbar.
double expectation_modular(const ModularWaveFunction& mwf, const PhaseSpaceObservable& obs);

/// F as a function of a single quadrature x_phi, when possible.
struct QuadratureForm {
  QuadratureAngle angle;
  std::function<double(double)> function;  // F(x_phi), real
};
std::optional<QuadratureForm> quadrature_form(const PhaseSpaceObservable& obs);

/// integral F(x_phi) p_phi(x_phi) over the rotated density.
double expectation_quadrature(const WaveFunction1D& psi, const PhaseSpaceObservable& obs);

/// K = integral zeta |f|^2 over the half torus.
double k_factor(const LogicalDecomposition& decomp, const PhaseSpaceObservable& obs);

struct BlochEstimate {
  Eigen::Vector3d gamma;
  Eigen::Vector3d k;
  Eigen::Vector3d bloch;  // gamma / k, 0 where k vanishes
};

BlochEstimate bloch_estimate(const WaveFunction1D& psi, const PhaseSpaceObservable& obs_x,
                             const PhaseSpaceObservable& obs_y, const PhaseSpaceObservable& obs_z);

/// integral F1(x1) F2(x2) p(x1, x2) with each mode read at its observable's angle.
double correlator(const WaveFunction2D& joint, const PhaseSpaceObservable& obs1,
                  const PhaseSpaceObservable& obs2);

/// Reduced logical qubit: rho = (1 + sum_b <Gamma1_b> sigma_b) / 2. The Gamma1
/// involutions act as exact Paulis on every modular fiber, so this is the
/// logical factor of Hilbert space = qubit (x) gauge.
Eigen::Matrix2cd logical_density(const WaveFunction1D& psi);
/// Two-qubit version, basis |00>, |01>, |10>, |11> (mode 0 first).
Eigen::Matrix4cd logical_density(const WaveFunction2D& joint);

}  // namespace modvar
