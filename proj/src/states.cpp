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

#include "modvar/states.hpp"

#include <cmath>
#include <sstream>

namespace modvar {

namespace {

double wrap_cyclic(double d, double length) {
  d = std::fmod(d + length / 2.0, length);
  if (d < 0.0) d += length;
  return d - length / 2.0;
}

}  // namespace

CombParams default_comb_params(const GridSpec& grid) {
  return CombParams{0.05 * grid.ell, 0.05 / grid.ell, CombOffset::zero};
}

WaveFunction1D gaussian_comb(const GridSpec& grid, const CombParams& params) {
  if (!(params.delta > 0.0) || !(params.kappa >= 0.0)) {
    throw Error("comb: Delta must be positive and kappa non-negative");
  }
  if (params.delta < 2.0 * grid.dx()) {
    std::ostringstream msg;
    msg << "comb: Delta=" << params.delta << " is below two grid spacings (dx=" << grid.dx()
        << "); increase M";
    throw Error(msg.str());
  }
  const Eigen::Index size = grid.size();
  const double length = grid.ell * grid.period_count;
  const double offset = params.offset == CombOffset::half ? grid.ell / 2.0 : 0.0;
  const Eigen::Index reach =
      std::min<Eigen::Index>(size / 2, static_cast<Eigen::Index>(std::ceil(12.0 * params.delta / grid.dx())));

  RVector spikes = RVector::Zero(size);
  const int periods = grid.period_count;
  for (int n = -periods / 2; n < periods / 2 + 1; ++n) {
    const double center = n * grid.ell + offset;
    if (center < -length / 2.0 || center >= length / 2.0) continue;
    const Eigen::Index nearest = static_cast<Eigen::Index>(std::llround(center / grid.dx())) + size / 2;
    for (Eigen::Index di = -reach; di <= reach; ++di) {
      Eigen::Index i = (nearest + di) % size;
      if (i < 0) i += size;
      const double d = wrap_cyclic(grid.position(i) - center, length);
      spikes[i] += std::exp(-d * d / (2.0 * params.delta * params.delta));
    }
  }
  CVector amp(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double xk = grid.position(i) * params.kappa;
    amp[i] = std::exp(-xk * xk / 2.0) * spikes[i];
  }
  return normalized(make_wavefunction(grid, std::move(amp)));
}

WaveFunction1D logical_state(const GridSpec& grid, const CombParams& params,
                             const BlochAngles& angles) {
  if (angles.theta < 0.0 || angles.theta > kPi) {
    throw Error("logical_state: theta must lie in [0, pi]");
  }
  CombParams zero = params;
  zero.offset = CombOffset::zero;
  CombParams one = params;
  one.offset = CombOffset::half;
  const WaveFunction1D c0 = gaussian_comb(grid, zero);
  const WaveFunction1D c1 = gaussian_comb(grid, one);
  CVector amp = std::cos(angles.theta / 2.0) * c0.amplitudes +
                std::polar(std::sin(angles.theta / 2.0), angles.phi) * c1.amplitudes;
  return normalized(make_wavefunction(grid, std::move(amp)));
}

Complex logical_basis_overlap(const GridSpec& grid, const CombParams& params) {
  CombParams zero = params;
  zero.offset = CombOffset::zero;
  CombParams one = params;
  one.offset = CombOffset::half;
  return overlap(gaussian_comb(grid, zero), gaussian_comb(grid, one));
}

WaveFunction1D grating_output(const GridSpec& grid, double kappa, double slit_width,
                              double slit_distance, std::optional<int> max_order) {
  if (std::abs(slit_distance - grid.ell) > 1e-12 * grid.ell) {
    throw Error("grating: slit distance must equal the grid period ell");
  }
  if (!(slit_width > 0.0)) throw Error("grating: slit width must be positive");
  const double step = kTwoPi * slit_width / slit_distance;
  int order = 0;
  while (std::exp(-0.5 * order * order * step * step) >= 1e-12) ++order;
  if (max_order) order = std::min(order, std::max(0, *max_order));

  const RVector x = grid.positions();
  CVector amp(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    // a_m = a_{-m}, so the series is real: a_0 + 2 sum_{m>0} a_m cos(m k x).
    double t = 1.0;
    for (int m = 1; m <= order; ++m) {
      t += 2.0 * std::exp(-0.5 * m * m * step * step) * std::cos(m * kTwoPi * x[i] / slit_distance);
    }
    const double xk = x[i] * kappa;
    amp[i] = std::exp(-xk * xk / 2.0) * t;
  }
  return normalized(make_wavefunction(grid, std::move(amp)));
}

WaveFunction1D random_state(const GridSpec& grid, Rng& rng, int packets) {
  const double x_half = grid.ell * grid.period_count / 2.0;
  const double p_half = kPi / grid.dx();
  // Width balancing the two windows; a symmetric grid gives sigma0 = 1.
  const double sigma0 = std::sqrt(x_half / p_half);
  const RVector x = grid.positions();
  CVector amp = CVector::Zero(grid.size());
  for (int k = 0; k < packets; ++k) {
    const double x0 = uniform(rng, -x_half / 4.0, x_half / 4.0);
    const double p0 = uniform(rng, -p_half / 4.0, p_half / 4.0);
    const double sigma = sigma0 * uniform(rng, 0.6, 1.6);
    const Complex c(standard_normal(rng), standard_normal(rng));
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double d = (x[i] - x0) / sigma;
      amp[i] += c * std::exp(-d * d / 2.0) * std::polar(1.0, p0 * x[i]);
    }
  }
  return normalized(make_wavefunction(grid, std::move(amp)));
}

BlochAngles random_bloch_angles(Rng& rng) {
  return BlochAngles{std::acos(uniform(rng, -1.0, 1.0)), uniform(rng, -kPi, kPi)};
}

}  // namespace modvar
