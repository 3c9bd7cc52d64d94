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

#include <gtest/gtest.h>

#include "helpers.hpp"

namespace modvar {
namespace {

using testing::distance;
using testing::fig_ell;
using testing::gaussian;
using testing::gaussian_momentum;
using testing::sampled;

TEST(GridSpec, SpacingsAndCoordinates) {
  const GridSpec g = make_grid(fig_ell(), 64, 32);
  EXPECT_EQ(g.size(), 2048);
  EXPECT_DOUBLE_EQ(g.dx(), fig_ell() / 64);
  EXPECT_DOUBLE_EQ(g.dp(), kTwoPi / (32 * fig_ell()));
  EXPECT_DOUBLE_EQ(g.position(1024), 0.0);
  EXPECT_DOUBLE_EQ(g.position(0), -16 * fig_ell());
  EXPECT_DOUBLE_EQ(g.momentum(0), -kPi / g.dx());
  // ell^2 == 2 pi M / P makes dx == dp.
  EXPECT_TRUE(g.symmetric());
  EXPECT_FALSE(make_grid(fig_ell(), 64, 16).symmetric());
}

TEST(GridSpec, RejectsBadShapes) {
  EXPECT_THROW(make_grid(0.0, 64, 32), Error);
  EXPECT_THROW(make_grid(-1.0, 64, 32), Error);
  EXPECT_THROW(make_grid(1.0, 62, 32), Error);
  EXPECT_THROW(make_grid(1.0, 64, 31), Error);
  EXPECT_THROW(make_grid(1.0, 1 << 12, 1 << 12), Error);
}

TEST(QuadratureAngle, WrapsIntoOneTurn) {
  EXPECT_DOUBLE_EQ(QuadratureAngle(-kPi / 2).radians(), 3 * kPi / 2);
  EXPECT_NEAR(QuadratureAngle(5 * kPi).radians(), kPi, 1e-15);
  EXPECT_DOUBLE_EQ(QuadratureAngle(kTwoPi).radians(), 0.0);
}

TEST(Momentum, MatchesNaiveSumAndIsUnitary) {
  const GridSpec g = make_grid(fig_ell(), 16, 8);
  const auto psi = testing::random_states(g, 1, 3)[0];
  const WaveFunction1D mom = to_momentum(psi);
  EXPECT_LT((mom.amplitudes - testing::naive_momentum(psi)).norm(), 1e-11);
  EXPECT_NEAR(mom.norm_squared(), psi.norm_squared(), 1e-12);
  EXPECT_LT(distance(from_momentum(mom), psi), 1e-13);
}

TEST(Momentum, GaussianMatchesClosedForm) {
  const GridSpec g = make_grid(fig_ell(), 64, 32);
  const double x0 = 1.3, p0 = -0.7, sigma = 0.8;
  const auto psi = sampled(g, [&](double x) { return gaussian(x, x0, p0, sigma); });
  const WaveFunction1D mom = to_momentum(psi);
  double err = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    err = std::max(err, std::abs(mom.amplitudes[k] - gaussian_momentum(g.momentum(k), x0, p0, sigma)));
  }
  EXPECT_LT(err, 1e-12);
}

TEST(FractionalFourier, QuarterTurnsAreExact) {
  const GridSpec g = make_grid(fig_ell(), 64, 16);  // non-symmetric is fine here
  const auto psi = testing::random_states(g, 1, 5)[0];
  EXPECT_EQ(fractional_fourier(psi, QuadratureAngle(0.0)).amplitudes, psi.amplitudes);
  const WaveFunction1D q = fractional_fourier(psi, QuadratureAngle(kPi / 2));
  EXPECT_LT((q.amplitudes - to_momentum(psi).amplitudes).norm(), 1e-14);
  EXPECT_DOUBLE_EQ(q.spacing(), g.dp());
  // pi: parity; 3pi/2: momentum density mirrored.
  const RVector d2 = quadrature_density(psi, QuadratureAngle(kPi));
  const RVector d0 = psi.amplitudes.cwiseAbs2();
  const RVector d1 = quadrature_density(psi, QuadratureAngle(kPi / 2));
  const RVector d3 = quadrature_density(psi, QuadratureAngle(3 * kPi / 2));
  const Eigen::Index n = g.size();
  for (Eigen::Index j = 1; j < n; ++j) {
    EXPECT_NEAR(d2[j], d0[n - j], 1e-13);
    EXPECT_NEAR(d3[j], d1[n - j], 1e-12);
  }
}

TEST(FractionalFourier, OffQuarterNeedsSymmetricGrid) {
  const GridSpec g = make_grid(fig_ell(), 64, 16);
  const auto psi = testing::random_states(g, 1, 5)[0];
  EXPECT_THROW(fractional_fourier(psi, QuadratureAngle(0.3)), Error);
}

// A real Gaussian of width sigma centered at (x0, p0) has x_phi density
// N(x0 cos phi + p0 sin phi, (cos^2 phi sigma^2 + sin^2 phi / sigma^2) / 2).
TEST(FractionalFourier, GaussianDensityAtAnyAngle) {
  const GridSpec g = make_grid(fig_ell(), 64, 32);
  const double x0 = 2.0, p0 = -1.5;
  for (double sigma : {1.0, 0.6, 1.7}) {
    const auto psi = sampled(g, [&](double x) { return gaussian(x, x0, p0, sigma); });
    for (double phi : {0.2, -0.7, kPi / 4, 1.1, 2.5, 4.0, 5.9}) {
      const RVector dens = quadrature_density(psi, QuadratureAngle(phi));
      const double c = std::cos(phi), s = std::sin(phi);
      const double mean = x0 * c + p0 * s;
      const double var = (c * c * sigma * sigma + s * s / (sigma * sigma)) / 2.0;
      double err = 0.0;
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double q = g.position(i);
        const double want = std::exp(-(q - mean) * (q - mean) / (2 * var)) / std::sqrt(kTwoPi * var);
        err = std::max(err, std::abs(dens[i] - want));
      }
      EXPECT_LT(err, 1e-9) << "sigma=" << sigma << " phi=" << phi;
    }
  }
}

TEST(FractionalFourier, InverseUndoesEveryAngle) {
  const GridSpec g = make_grid(fig_ell(), 32, 16);
  for (const auto& psi : testing::random_states(g, 5, 11)) {
    for (double phi : {0.0, 0.4, kPi / 2, 2.0, kPi, 4.4, 3 * kPi / 2, 6.0}) {
      EXPECT_LT(distance(from_quadrature(fractional_fourier(psi, QuadratureAngle(phi))), psi), 1e-12);
      EXPECT_NEAR(fractional_fourier(psi, QuadratureAngle(phi)).norm_squared(), 1.0, 1e-12);
    }
  }
}

TEST(Overlap, ChecksGridAndRepresentation) {
  const GridSpec g = make_grid(fig_ell(), 16, 8);
  const auto psi = testing::random_states(g, 1, 1)[0];
  EXPECT_NEAR(fidelity(psi, psi), 1.0, 1e-12);
  EXPECT_THROW(overlap(psi, to_momentum(psi)), Error);
  const auto other = testing::random_states(make_grid(fig_ell(), 16, 4), 1, 1)[0];
  EXPECT_THROW(overlap(psi, other), Error);
  EXPECT_THROW(normalized(make_wavefunction(g, CVector::Zero(g.size()))), Error);
}

}  // namespace
}  // namespace modvar
