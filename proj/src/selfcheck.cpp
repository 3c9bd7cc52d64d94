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

#include "modvar/selfcheck.hpp"

#include <algorithm>
#include <cmath>

#include "modvar/circuit.hpp"
#include "modvar/modular.hpp"
#include "modvar/operators.hpp"
#include "modvar/povm.hpp"
#include "modvar/random.hpp"
#include "modvar/readout.hpp"
#include "modvar/states.hpp"

namespace modvar {

namespace {

double distance(const WaveFunction1D& a, const WaveFunction1D& b) {
  return std::sqrt((a.amplitudes - b.amplitudes).squaredNorm() * a.grid.dx());
}

WaveFunction1D sum(const WaveFunction1D& a, const WaveFunction1D& b, Complex cb = 1.0) {
  WaveFunction1D out = a;
  out.amplitudes += cb * b.amplitudes;
  return out;
}

}  // namespace

std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed, int states) {
  const GridSpec grid = default_grid();
  Rng rng(seed);
  std::vector<WaveFunction1D> psis;
  for (int i = 0; i < states; ++i) psis.push_back(random_state(grid, rng));

  const PhaseSpaceObservable rx = builtin_observable("ReX", grid);
  const PhaseSpaceObservable ry = builtin_observable("ReY", grid);
  const PhaseSpaceObservable rz = builtin_observable("ReZ", grid);
  const PhaseSpaceObservable* triple[3] = {&rx, &ry, &rz};

  InvariantResult zak{"zak round trip", 0.0, 1e-12};
  InvariantResult anti{"pauli anticommutators", 0.0, 1e-10};
  InvariantResult z2{"Z^2 invisibility", 0.0, 1e-10};
  InvariantResult ball{"bloch ball excess", 0.0, 1e-9};
  InvariantResult paths{"expectation paths agree", 0.0, 1e-6};
  InvariantResult cliff{"F X F^dag == Z", 0.0, 1e-8};
  InvariantResult povm{"povm p+ - p- == <ReZ>", 0.0, 1e-8};

  for (const auto& psi : psis) {
    zak.residual = std::max(zak.residual, distance(inverse_zak(zak_transform(psi)), psi));

    const auto X = [](const WaveFunction1D& s) { return logical_X(s); };
    const auto Y = [](const WaveFunction1D& s) { return logical_Y(s); };
    const auto Z = [](const WaveFunction1D& s) { return logical_Z(s); };
    anti.residual = std::max(anti.residual, std::sqrt(sum(Z(X(psi)), X(Z(psi))).norm_squared()));
    anti.residual = std::max(anti.residual, std::sqrt(sum(Z(Y(psi)), Y(Z(psi))).norm_squared()));
    anti.residual = std::max(anti.residual, std::sqrt(sum(X(Y(psi)), Y(X(psi))).norm_squared()));

    const WaveFunction1D zz = Z(Z(psi));
    const auto mwf = zak_transform(psi);
    Eigen::Vector3d gamma;
    for (int b = 0; b < 3; ++b) {
      const double e = expectation(psi, *triple[b]);
      gamma[b] = e;
      z2.residual = std::max(z2.residual, std::abs(expectation(zz, *triple[b]) - e));
      paths.residual = std::max(paths.residual, std::abs(expectation_modular(mwf, *triple[b]) - e));
      paths.residual = std::max(paths.residual, std::abs(expectation_quadrature(psi, *triple[b]) - e));
    }
    ball.residual = std::max(ball.residual, gamma.squaredNorm() - 1.0);

    cliff.residual = std::max(
        cliff.residual, distance(rescaled_fourier(X(rescaled_fourier(psi, true))), Z(psi)));
  }
  const WaveFunction1D zero = logical_state(grid, default_comb_params(grid), {0.0, 0.0});
  povm.residual = std::abs(povm_measure(zero, arccos_gate(grid, rz)).expectation - expectation(zero, rz));
  return {zak, anti, z2, ball, paths, cliff, povm};
}

}  // namespace modvar
