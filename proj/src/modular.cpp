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

#include "modvar/modular.hpp"

#include <cmath>

namespace modvar {

namespace {

// E(m, k) = exp(-i n_m pbar_k ell) with n_m = m - P/2.
CMatrix zak_phases(const GridSpec& grid) {
  const Eigen::Index periods = grid.period_count;
  CMatrix e(periods, periods);
  for (Eigen::Index m = 0; m < periods; ++m) {
    for (Eigen::Index k = 0; k < periods; ++k) {
      const double n = static_cast<double>(m - periods / 2);
      const double pbar_ell = kTwoPi * static_cast<double>(k - periods / 2) /
                              static_cast<double>(periods);
      e(m, k) = std::polar(1.0, -n * pbar_ell);
    }
  }
  return e;
}

double wrap_phase(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r >= kPi) r -= kTwoPi;
  return r;
}

struct FiberFields {
  Complex f;
  double theta;
  double phi;
};

FiberFields split_fiber(Complex first, Complex partner) {
  const double mag = std::hypot(std::abs(first), std::abs(partner));
  if (mag < tol::kDegenerate) return {Complex(mag, 0.0), 0.0, 0.0};
  const double arg_first = std::arg(first);
  return {std::polar(mag, arg_first), 2.0 * std::atan2(std::abs(partner), std::abs(first)),
          wrap_phase(std::arg(partner) - arg_first)};
}

}  // namespace

Eigen::Index zak_position_index(const GridSpec& grid, Eigen::Index j, Eigen::Index n) {
  const Eigen::Index size = grid.size();
  const Eigen::Index per = grid.points_per_period;
  Eigen::Index i = size / 2 + n * per - per / 4 + j;
  i %= size;
  if (i < 0) i += size;
  return i;
}

ModularWaveFunction zak_transform(const WaveFunction1D& psi) {
  detail::require_position(psi, "zak_transform");
  const GridSpec& grid = psi.grid;
  const Eigen::Index per = grid.points_per_period;
  const Eigen::Index periods = grid.period_count;
  CMatrix samples(per, periods);
  for (Eigen::Index j = 0; j < per; ++j) {
    for (Eigen::Index m = 0; m < periods; ++m) {
      samples(j, m) = psi.amplitudes[zak_position_index(grid, j, m - periods / 2)];
    }
  }
  const double scale = std::sqrt(grid.ell / kTwoPi);
  return ModularWaveFunction{grid, scale * samples * zak_phases(grid)};
}

WaveFunction1D inverse_zak(const ModularWaveFunction& mwf) {
  const GridSpec& grid = mwf.grid;
  const Eigen::Index per = grid.points_per_period;
  const Eigen::Index periods = grid.period_count;
  if (mwf.amplitudes.rows() != per || mwf.amplitudes.cols() != periods) {
    throw Error("inverse_zak: amplitude matrix does not match the grid");
  }
  const double scale = std::sqrt(grid.ell / kTwoPi) * grid.dp();
  const CMatrix samples = scale * mwf.amplitudes * zak_phases(grid).adjoint();
  CVector out(grid.size());
  for (Eigen::Index j = 0; j < per; ++j) {
    for (Eigen::Index m = 0; m < periods; ++m) {
      out[zak_position_index(grid, j, m - periods / 2)] = samples(j, m);
    }
  }
  return make_wavefunction(grid, std::move(out));
}

LogicalDecomposition extract_qubit(const ModularWaveFunction& mwf, QubitGauge gauge) {
  const GridSpec& grid = mwf.grid;
  const Eigen::Index half = grid.points_per_period / 2;
  const Eigen::Index periods = grid.period_count;
  LogicalDecomposition out{grid, QubitSplit::position, gauge, CMatrix(half, periods),
                           RMatrix(half, periods), RMatrix(half, periods)};
  for (Eigen::Index k = 0; k < periods; ++k) {
    const Complex twist = gauge == QubitGauge::modified
                              ? std::polar(1.0, mwf.pbar(k) * grid.ell / 4.0)
                              : Complex(1.0, 0.0);
    for (Eigen::Index j = 0; j < half; ++j) {
      const auto fields = split_fiber(mwf.amplitudes(j, k) * twist,
                                      mwf.amplitudes(j + half, k) * std::conj(twist));
      out.f(j, k) = fields.f;
      out.theta(j, k) = fields.theta;
      out.phi(j, k) = fields.phi;
    }
  }
  return out;
}

LogicalDecomposition extract_qubit_momentum(const ModularWaveFunction& mwf) {
  const GridSpec& grid = mwf.grid;
  const Eigen::Index periods = grid.period_count;
  if (periods % 4 != 0) {
    throw Error("extract_qubit_momentum: needs P divisible by 4");
  }
  const Eigen::Index per = grid.points_per_period;
  const Eigen::Index half = periods / 2;
  LogicalDecomposition out{grid, QubitSplit::momentum, QubitGauge::plain, CMatrix(per, half),
                           RMatrix(per, half), RMatrix(per, half)};
  for (Eigen::Index c = 0; c < half; ++c) {
    const Eigen::Index k = periods / 4 + c;
    const Eigen::Index partner = (k + half) % periods;
    for (Eigen::Index j = 0; j < per; ++j) {
      const auto fields = split_fiber(mwf.amplitudes(j, k), mwf.amplitudes(j, partner));
      out.f(j, c) = fields.f;
      out.theta(j, c) = fields.theta;
      out.phi(j, c) = fields.phi;
    }
  }
  return out;
}

ModularWaveFunction reconstruct(const LogicalDecomposition& d) {
  const GridSpec& grid = d.grid;
  const Eigen::Index per = grid.points_per_period;
  const Eigen::Index periods = grid.period_count;
  ModularWaveFunction out{grid, CMatrix::Zero(per, periods)};
  auto first = [&](Eigen::Index r, Eigen::Index c) {
    return d.f(r, c) * std::cos(d.theta(r, c) / 2.0);
  };
  auto partner = [&](Eigen::Index r, Eigen::Index c) {
    return d.f(r, c) * std::polar(1.0, d.phi(r, c)) * std::sin(d.theta(r, c) / 2.0);
  };
  if (d.split == QubitSplit::position) {
    const Eigen::Index half = per / 2;
    for (Eigen::Index k = 0; k < periods; ++k) {
      const Complex twist = d.gauge == QubitGauge::modified
                                ? std::polar(1.0, out.pbar(k) * grid.ell / 4.0)
                                : Complex(1.0, 0.0);
      for (Eigen::Index j = 0; j < half; ++j) {
        out.amplitudes(j, k) = first(j, k) * std::conj(twist);
        out.amplitudes(j + half, k) = partner(j, k) * twist;
      }
    }
  } else {
    const Eigen::Index half = periods / 2;
    for (Eigen::Index c = 0; c < half; ++c) {
      const Eigen::Index k = periods / 4 + c;
      const Eigen::Index other = (k + half) % periods;
      for (Eigen::Index j = 0; j < per; ++j) {
        out.amplitudes(j, k) = first(j, c);
        out.amplitudes(j, other) = partner(j, c);
      }
    }
  }
  return out;
}

}  // namespace modvar
