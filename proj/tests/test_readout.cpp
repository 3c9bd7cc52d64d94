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
#include "modvar/readout.hpp"

namespace modvar {
namespace {

using testing::fig_ell;

const GridSpec& grid() {
  static const GridSpec g = make_grid(fig_ell(), 64, 32);
  return g;
}

const std::vector<WaveFunction1D>& states() {
  static const auto s = testing::random_states(grid(), 30, 4321);
  return s;
}

PhaseSpaceObservable obs(const std::string& name) { return builtin_observable(name, grid()); }

PhaseSpaceObservable mutated(const std::string& base, PhaseSpaceObservable::Index extra, Complex d) {
  PhaseSpaceObservable o = obs(base);
  auto coeffs = o.coeffs;
  for (auto& [k, v] : coeffs) v *= 0.8;
  coeffs[extra] += d;
  coeffs[{-extra.first, -extra.second}] += std::conj(d);
  return certified(make_observable(base + "+", coeffs, o.L, o.Lp), grid());
}

TEST(Certification, BuiltinsHaveTheirClasses) {
  EXPECT_EQ(obs("ReZ").beta_class, BetaClass::z);
  EXPECT_EQ(obs("ReX").beta_class, BetaClass::x);
  EXPECT_EQ(obs("ReY").beta_class, BetaClass::y);
  EXPECT_EQ(obs("G1Z").beta_class, BetaClass::z);
  EXPECT_EQ(obs("G1X").beta_class, BetaClass::x);
  EXPECT_EQ(obs("G1Y").beta_class, BetaClass::y);
  EXPECT_THROW(obs("ReW"), Error);
}

TEST(Certification, MutatedTablesAreRejected) {
  // An even-n term in Re Z, an odd-m term in Re X, a diagonal term in Re Y.
  EXPECT_EQ(mutated("ReZ", {2, 0}, 0.1).beta_class, BetaClass::none);
  EXPECT_EQ(mutated("ReX", {1, 0}, 0.1).beta_class, BetaClass::none);
  EXPECT_EQ(mutated("ReY", {2, 2}, 0.1).beta_class, BetaClass::none);
  EXPECT_EQ(mutated("ReY", {0, 1}, 0.1).beta_class, BetaClass::none);
  // Odd n with any m keeps the z structure when L == Lp == ell.
  EXPECT_EQ(mutated("ReZ", {3, 2}, 0.05).beta_class, BetaClass::z);
  // A phase on the odd term only shifts the cosine; sin also flips between halves.
  EXPECT_EQ(mutated("ReZ", {1, 1}, Complex(0.0, 0.1)).beta_class, BetaClass::z);
  EXPECT_EQ(mutated("ReZ", {1, 0}, Complex(0.0, 0.1)).beta_class, BetaClass::z);
  // Momentum kicks that leave the fiber.
  EXPECT_EQ(certify_class(make_observable("half", {{{1, 0}, 0.5}, {{-1, 0}, 0.5}}, 2 * fig_ell(), fig_ell()),
                          grid()),
            BetaClass::none);
}

TEST(Certification, ValidatesTables) {
  const double ell = fig_ell();
  // Literal (1,1) = 1/2, (-1,-1) = -1/2 is anti-Hermitian under d(-n,-m) = conj d(n,m).
  EXPECT_THROW(make_observable("y", {{{1, 1}, 0.5}, {{-1, -1}, -0.5}}, ell / 2, ell), Error);
  EXPECT_THROW(make_observable("big", {{{1, 0}, 0.7}, {{-1, 0}, 0.7}}, ell, ell), Error);
  EXPECT_THROW(make_observable("bad", {{{1, 0}, 0.5}, {{-1, 0}, 0.5}}, 0.0, ell), Error);
  const auto tiny = make_observable("tiny", {{{1, 0}, 0.5}, {{-1, 0}, 0.5}, {{3, 0}, 1e-15}}, ell, ell);
  EXPECT_EQ(tiny.coeffs.size(), 2u);
  EXPECT_DOUBLE_EQ(obs("ReZ").coefficient_l2(), 0.5);
  EXPECT_DOUBLE_EQ(obs("ReZ").coefficient_l1(), 1.0);
}

TEST(Zeta, ClosedForms) {
  const GridSpec& g = grid();
  const ModularWaveFunction shape{g, CMatrix()};
  const RMatrix zz = zeta_function(obs("ReZ"), g);
  const RMatrix zx = zeta_function(obs("ReX"), g);
  const RMatrix zy = zeta_function(obs("ReY"), g);
  for (Eigen::Index k = 0; k < g.period_count; ++k) {
    for (Eigen::Index j = 0; j < g.points_per_period / 2; ++j) {
      const double xb = shape.xbar(j), pb = shape.pbar(k);
      EXPECT_NEAR(zz(j, k), std::cos(kTwoPi * xb / g.ell), 1e-12);
      EXPECT_NEAR(zx(j, k), std::cos(pb * g.ell / 2), 1e-12);
      EXPECT_NEAR(zy(j, k), std::cos(kTwoPi * xb / g.ell - pb * g.ell / 2), 1e-12);
    }
  }
  EXPECT_EQ(zeta_function(obs("G1Y"), g), RMatrix::Ones(32, 32));
  EXPECT_THROW(zeta_function(mutated("ReZ", {2, 0}, 0.1), g), Error);
}

TEST(Expectation, DenseQuadratureOracleForReZ) {
  const GridSpec& g = grid();
  const auto zero = logical_state(g, default_comb_params(g), {0.0, 0.0});
  double oracle = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    oracle += std::cos(kTwoPi * g.position(i) / g.ell) * std::norm(zero.amplitudes[i]) * g.dx();
  }
  const double e = expectation(zero, obs("ReZ"));
  EXPECT_NEAR(e, oracle, 1e-12);
  EXPECT_GT(e, 0.9);
  EXPECT_LT(e, 1.0);
  EXPECT_NEAR(expectation(logical_state(g, default_comb_params(g), {kPi / 2, 0.0}), obs("ReZ")), 0.0, 1e-6);
}

TEST(Expectation, FourierDualityAtSymmetricWidths) {
  const GridSpec& g = grid();
  const CombParams p{0.15, 0.15, CombOffset::zero};
  EXPECT_NEAR(expectation(logical_state(g, p, {kPi / 2, 0.0}), obs("ReX")),
              expectation(logical_state(g, p, {0.0, 0.0}), obs("ReZ")), 1e-6);
}

TEST(Expectation, ThreePathsAgree) {
  for (const auto& psi : states()) {
    const ModularWaveFunction m = zak_transform(psi);
    for (const char* name : {"ReX", "ReY", "ReZ", "G1X", "G1Z"}) {
      const double e = expectation(psi, obs(name));
      EXPECT_NEAR(expectation_modular(m, obs(name)), e, 1e-10) << name;
      EXPECT_NEAR(expectation_quadrature(psi, obs(name)), e, 1e-8) << name;
    }
    EXPECT_NEAR(expectation_modular(m, obs("G1Y")), expectation(psi, obs("G1Y")), 1e-10);
  }
  EXPECT_THROW(expectation_quadrature(states()[0], obs("G1Y")), Error);
}

TEST(Expectation, ReYQuadratureUsesTheRotatedFrequency) {
  const double ell = fig_ell();
  const auto form = quadrature_form(obs("ReY"));
  ASSERT_TRUE(form.has_value());
  const double g = std::sqrt(1.0 + std::pow(ell, 4) / std::pow(4 * kPi, 2));
  EXPECT_NEAR(std::remainder(form->angle.radians() - std::atan(-ell * ell / (4 * kPi)), kTwoPi), 0.0, 1e-15);
  for (double x : {-3.0, -0.4, 0.0, 1.7, 5.2}) {
    EXPECT_NEAR(form->function(x), std::cos(kTwoPi / ell * g * x), 1e-12);
  }
}

TEST(Expectation, SymmetriesOnEveryState) {
  for (const auto& psi : states()) {
    const WaveFunction1D zz = logical_Z(logical_Z(psi));
    const WaveFunction1D x = logical_X(psi);
    for (const char* name : {"ReX", "ReY", "ReZ"}) {
      EXPECT_NEAR(expectation(zz, obs(name)), expectation(psi, obs(name)), 1e-10);
    }
    EXPECT_NEAR(expectation(x, obs("ReZ")), -expectation(psi, obs("ReZ")), 1e-10);
    EXPECT_NEAR(expectation(x, obs("ReY")), -expectation(psi, obs("ReY")), 1e-10);
    EXPECT_NEAR(expectation(x, obs("ReX")), expectation(psi, obs("ReX")), 1e-10);
  }
}

TEST(Expectation, RejectsIncommensuratePeriods) {
  const auto o = make_observable("odd", {{{1, 0}, 0.5}, {{-1, 0}, 0.5}}, 1.2345, 1.2345);
  EXPECT_THROW(expectation(states()[0], o), Error);
  EXPECT_EQ(certify_class(o, grid()), BetaClass::none);
}

TEST(KFactor, UnitForConstantZetaAndOracleForReZ) {
  const GridSpec& g = grid();
  const auto zero = logical_state(g, default_comb_params(g), {0.0, 0.0});
  const auto d = extract_qubit(zak_transform(zero));
  EXPECT_NEAR(k_factor(d, obs("G1Z")), 1.0, 1e-12);
  const double kz = k_factor(d, obs("ReZ"));
  EXPECT_GT(kz, 0.9);
  EXPECT_LT(kz, 1.0);
  EXPECT_NEAR(kz, expectation(zero, obs("ReZ")), 1e-8);
  EXPECT_NEAR(expectation_modular(zak_transform(logical_state(g, default_comb_params(g), {kPi, 0.0})), obs("ReZ")),
              -expectation(zero, obs("ReZ")), 1e-5);
}

TEST(KFactor, LogicalSweepRecoversBlochVector) {
  const GridSpec& g = grid();
  const CombParams p = default_comb_params(g);
  Rng rng(5);
  for (int i = 0; i < 12; ++i) {
    const BlochAngles a = random_bloch_angles(rng);
    const BlochEstimate b = bloch_estimate(logical_state(g, p, a), obs("ReX"), obs("ReY"), obs("ReZ"));
    const Eigen::Vector3d want(std::sin(a.theta) * std::cos(a.phi), std::sin(a.theta) * std::sin(a.phi),
                               std::cos(a.theta));
    EXPECT_LT((b.bloch - want).cwiseAbs().maxCoeff(), 1e-3);
  }
}

TEST(Bloch, ZeroStateAndMismatchedClasses) {
  const GridSpec& g = grid();
  const auto zero = logical_state(g, default_comb_params(g), {0.0, 0.0});
  const BlochEstimate b = bloch_estimate(zero, obs("ReX"), obs("ReY"), obs("ReZ"));
  EXPECT_LT((b.bloch - Eigen::Vector3d(0, 0, 1)).norm(), 1e-2);
  EXPECT_THROW(bloch_estimate(zero, obs("ReZ"), obs("ReY"), obs("ReX")), Error);
}

TEST(Bloch, PhaseAveragedEqualSuperpositionHasNoBlochVector) {
  const GridSpec& g = grid();
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (int q = 0; q < 4; ++q) {
    sum += bloch_estimate(logical_state(g, default_comb_params(g), {kPi / 2, q * kPi / 2}), obs("ReX"),
                          obs("ReY"), obs("ReZ"))
               .gamma;
  }
  EXPECT_LT(sum.norm() / 4, 1e-6);
}

TEST(Bloch, BallBoundOnRandomStates) {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const auto psi = random_state(grid(), rng);
    Eigen::Vector3d gamma(expectation(psi, obs("ReX")), expectation(psi, obs("ReY")), expectation(psi, obs("ReZ")));
    EXPECT_LE(gamma.squaredNorm(), 1.0 + 1e-9);
    Eigen::Vector3d g1(expectation(psi, obs("G1X")), expectation(psi, obs("G1Y")), expectation(psi, obs("G1Z")));
    EXPECT_LE(g1.squaredNorm(), 1.0 + 1e-9);
  }
}

TEST(LogicalDensity, ZeroStateIsProjector) {
  const GridSpec& g = grid();
  const auto rho = logical_density(logical_state(g, default_comb_params(g), {0.0, 0.0}));
  EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-6);
  EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-6);
  for (const auto& psi : states()) {
    const auto r = logical_density(psi);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(r);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);
  }
}

// --- two modes ---

const GridSpec& two_grid() {
  static const GridSpec g = make_grid(fig_ell(), 64, 8);
  return g;
}

TEST(Correlator, ProductStatesFactorize) {
  const GridSpec& g = two_grid();
  const CombParams p = default_comb_params(g);
  const auto a = logical_state(g, p, {0.4, 0.0});
  const auto b = logical_state(g, p, {2.0, 1.0});
  const auto rz = builtin_observable("ReZ", g);
  const auto rx = builtin_observable("ReX", g);
  const WaveFunction2D ab = tensor(a, b);
  EXPECT_NEAR(correlator(ab, rz, rz), expectation(a, rz) * expectation(b, rz), 1e-8);
  EXPECT_NEAR(correlator(ab, rx, rz), expectation(a, rx) * expectation(b, rz), 1e-8);
  EXPECT_NEAR(expectation(ab, rx, 0), expectation(a, rx), 1e-10);
  EXPECT_NEAR(expectation(ab, rz, 1), expectation(b, rz), 1e-10);
}

TEST(Correlator, BellStates) {
  const GridSpec& g = two_grid();
  const CombParams p = default_comb_params(g);
  const auto rz = builtin_observable("ReZ", g);
  const double kz = k_factor(extract_qubit(zak_transform(logical_state(g, p, {0.0, 0.0}))), rz);
  const double phi_plus = correlator(bell_logical(g, p, BellState::phi_plus), rz, rz);
  EXPECT_GT(phi_plus, 0.8 * kz * kz);
  EXPECT_NEAR(phi_plus, kz * kz, 1e-2);
  EXPECT_NEAR(correlator(bell_logical(g, p, BellState::psi_minus), rz, rz), -kz * kz, 1e-2);
  // Maximally entangled marginals carry no Bloch vector.
  const WaveFunction2D bell = bell_logical(g, p, BellState::phi_plus);
  for (const char* name : {"ReX", "ReY", "ReZ"}) {
    EXPECT_NEAR(expectation(bell, builtin_observable(name, g), 0), 0.0, 1e-6) << name;
  }
}

TEST(Correlator, NeedsQuadratureDiagonalObservables) {
  const GridSpec& g = two_grid();
  const auto s = testing::random_states(g, 2, 1);
  EXPECT_THROW(correlator(tensor(s[0], s[1]), builtin_observable("G1Y", g), builtin_observable("ReZ", g)), Error);
}

TEST(ObservableJson, ParsesAndRoundTrips) {
  const std::string text = R"({"name": "myz", "L": "ell", "Lp": "ell", "coeffs": [[1, 0, 0.5, 0], [-1, 0, 0.5, 0]]})";
  const auto o = parse_observable_json(text, grid());
  EXPECT_EQ(o.beta_class, BetaClass::z);
  EXPECT_DOUBLE_EQ(o.L, fig_ell());
  const auto again = parse_observable_json(observable_to_json(o), grid());
  EXPECT_EQ(again.coeffs, o.coeffs);
  EXPECT_EQ(again.L, o.L);
  EXPECT_EQ(again.name, "myz");
  EXPECT_THROW(parse_observable_json("{", grid()), Error);
  EXPECT_THROW(parse_observable_json(R"({"L": 1, "Lp": 1})", grid()), Error);
  EXPECT_THROW(parse_observable_json(R"({"L": 1, "Lp": 1, "coeffs": [[0.5, 0, 1, 0]]})", grid()), Error);
  EXPECT_THROW(parse_observable_json(R"({"L": "2*foo", "Lp": 1, "coeffs": []})", grid()), Error);
}

}  // namespace
}  // namespace modvar
