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

// Independent reference computations shared by the tests. Nothing here calls
// the FFT or the modular code paths under test.

#include <cmath>
#include <functional>

#include "modvar/grid.hpp"
#include "modvar/random.hpp"
#include "modvar/states.hpp"

namespace modvar::testing {

inline double distance(const WaveFunction1D& a, const WaveFunction1D& b) {
  return std::sqrt((a.amplitudes - b.amplitudes).squaredNorm() * a.grid.dx());
}

inline WaveFunction1D scaled(WaveFunction1D a, Complex c) {
  a.amplitudes *= c;
  return a;
}

inline WaveFunction1D plus(WaveFunction1D a, const WaveFunction1D& b, Complex c = 1.0) {
  a.amplitudes += c * b.amplitudes;
  return a;
}

/// Sampled function on the position grid.
inline WaveFunction1D sampled(const GridSpec& grid, const std::function<Complex(double)>& f) {
  CVector v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v[i] = f(grid.position(i));
  return make_wavefunction(grid, std::move(v));
}

/// pi^(-1/4) sigma^(-1/2) exp(-(x - x0)^2 / (2 sigma^2) + i p0 x).
inline Complex gaussian(double x, double x0, double p0, double sigma) {
  return std::pow(kPi, -0.25) / std::sqrt(sigma) *
         std::exp(-(x - x0) * (x - x0) / (2.0 * sigma * sigma)) * std::polar(1.0, p0 * x);
}

/// Fourier transform of `gaussian` with kernel exp(-i p x)/sqrt(2 pi).
inline Complex gaussian_momentum(double p, double x0, double p0, double sigma) {
  return std::pow(kPi, -0.25) * std::sqrt(sigma) *
         std::exp(-(p - p0) * (p - p0) * sigma * sigma / 2.0) * std::polar(1.0, -(p - p0) * x0);
}

/// O(N^2) centered DFT with the exp(-i p x) kernel, the momentum oracle.
inline CVector naive_momentum(const WaveFunction1D& psi) {
  const GridSpec& g = psi.grid;
  CVector out = CVector::Zero(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      out[k] += std::polar(1.0, -g.momentum(k) * g.position(j)) * psi.amplitudes[j];
    }
  }
  return out * g.dx() / std::sqrt(kTwoPi);
}

/// A batch of random normalized states.
inline std::vector<WaveFunction1D> random_states(const GridSpec& grid, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<WaveFunction1D> out;
  for (int i = 0; i < count; ++i) out.push_back(random_state(grid, rng));
  return out;
}

/// ell = 2 sqrt(pi): the lattice length shared by most tests.
inline double fig_ell() { return 2.0 * std::sqrt(kPi); }

}  // namespace modvar::testing
