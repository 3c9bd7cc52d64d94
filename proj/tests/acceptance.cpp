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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <Eigen/SVD>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "helpers.hpp"
#include "modvar/modular.hpp"
#include "modvar/operators.hpp"
#include "modvar/povm.hpp"
#include "modvar/readout.hpp"
#include "modvar/two_mode.hpp"

namespace {

using namespace modvar;
using testing::distance;
using testing::fig_ell;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
};

const GridSpec& grid() {
  static const GridSpec g = make_grid(fig_ell(), 64, 32);
  return g;
}

PhaseSpaceObservable obs(const std::string& name) { return builtin_observable(name, grid()); }

WaveFunction1D sum(WaveFunction1D a, const WaveFunction1D& b, Complex c = 1.0) {
  a.amplitudes += c * b.amplitudes;
  return a;
}
double norm(const WaveFunction1D& a) { return std::sqrt(a.norm_squared()); }

Verdict zak_unitarity() {
  Verdict v;
  double round = 0.0, inner = 0.0;
  const auto s = testing::random_states(grid(), 101, 1001);
  for (int i = 0; i < 100; ++i) {
    const auto a = zak_transform(s[i]);
    const auto b = zak_transform(s[i + 1]);
    round = std::max(round, distance(inverse_zak(a), s[i]));
    const Complex modular = (a.amplitudes.conjugate().cwiseProduct(b.amplitudes)).sum() * a.cell_area();
    inner = std::max(inner, std::abs(modular - overlap(s[i], s[i + 1])));
  }
  v.pass = round < 1e-12 && inner < 1e-10;
  v.detail << "round trip " << round << ", inner product " << inner;
  return v;
}

Verdict separability() {
  Verdict v;
  const GridSpec g = make_grid(fig_ell(), 128, 64);
  double prev = 0.0;
  for (double t : {0.02, 0.05, 0.1}) {
    const auto m = zak_transform(gaussian_comb(g, {t * g.ell, t / g.ell, CombOffset::zero}));
    const Eigen::JacobiSVD<CMatrix> svd(m.amplitudes);
    const auto sv = svd.singularValues();
    const double res = std::sqrt(std::max(0.0, 1.0 - sv[0] * sv[0] / sv.squaredNorm()));
    v.pass = v.pass && res <= 5 * t && res > prev;
    prev = res;
    v.detail << "t=" << t << ": " << res << " (bound " << 5 * t << ") ";
  }
  return v;
}

Verdict pauli_algebra() {
  Verdict v;
  double anti = 0.0, comm = 0.0;
  for (const auto& psi : testing::random_states(grid(), 100, 1003)) {
    const auto X = [](const WaveFunction1D& s) { return logical_X(s); };
    const auto Y = [](const WaveFunction1D& s) { return logical_Y(s); };
    const auto Z = [](const WaveFunction1D& s) { return logical_Z(s); };
    anti = std::max({anti, norm(sum(Z(X(psi)), X(Z(psi)))), norm(sum(Z(Y(psi)), Y(Z(psi)))),
                     norm(sum(X(Y(psi)), Y(X(psi))))});
    // [A, B] = 2i C^dag over cyclic (X, Y, Z).
    const auto dag = [&](Pauli p) { return logical_pauli(psi, p, true); };
    comm = std::max({comm, norm(sum(sum(X(Y(psi)), Y(X(psi)), -1.0), dag(Pauli::z), Complex(0, -2))),
                     norm(sum(sum(Y(Z(psi)), Z(Y(psi)), -1.0), dag(Pauli::x), Complex(0, -2))),
                     norm(sum(sum(Z(X(psi)), X(Z(psi)), -1.0), dag(Pauli::y), Complex(0, -2)))});
  }
  v.pass = anti < 1e-10 && comm < 1e-10;
  v.detail << "anticommutators " << anti << ", commutators " << comm;
  return v;
}

Verdict z2_invisibility() {
  Verdict v;
  double worst = 0.0;
  for (const auto& psi : testing::random_states(grid(), 100, 1004)) {
    const auto zz = logical_Z(logical_Z(psi));
    for (const char* name : {"ReX", "ReY", "ReZ"}) {
      worst = std::max(worst, std::abs(expectation(zz, obs(name)) - expectation(psi, obs(name))));
    }
  }
  v.pass = worst < 1e-10;
  v.detail << "max change " << worst;
  return v;
}

Verdict bloch_ball() {
  Verdict v;
  double worst = -1.0;
  // Half generic packets, half narrow logical states that sit close to the surface.
  auto states = testing::random_states(grid(), 500, 1005);
  Rng rng(1105);
  for (int i = 0; i < 500; ++i) {
    const double t = 0.035 + 0.03 * uniform01(rng);
    states.push_back(logical_state(grid(), {t * fig_ell(), t / fig_ell(), CombOffset::zero}, random_bloch_angles(rng)));
  }
  for (const auto& psi : states) {
    const Eigen::Vector3d g(expectation(psi, obs("ReX")), expectation(psi, obs("ReY")), expectation(psi, obs("ReZ")));
    worst = std::max(worst, g.squaredNorm());
  }
  v.pass = worst <= 1.0 + 1e-9;
  v.detail << "max |gamma|^2 " << worst;
  return v;
}

Verdict expectation_paths() {
  Verdict v;
  double worst = 0.0;
  for (const auto& psi : testing::random_states(grid(), 50, 1006)) {
    const auto m = zak_transform(psi);
    for (const char* name : {"ReX", "ReY", "ReZ"}) {
      const double a = expectation(psi, obs(name));
      const double b = expectation_modular(m, obs(name));
      const double c = expectation_quadrature(psi, obs(name));
      worst = std::max({worst, std::abs(a - b), std::abs(b - c), std::abs(a - c)});
    }
  }
  v.pass = worst < 1e-6;
  v.detail << "max pairwise difference " << worst;
  return v;
}

Verdict clifford() {
  Verdict v;
  double fx = 0.0, fz = 0.0, sx = 0.0;
  for (const auto& psi : testing::random_states(grid(), 50, 1007)) {
    const auto F = [](const WaveFunction1D& s) { return rescaled_fourier(s); };
    const auto Fd = [](const WaveFunction1D& s) { return rescaled_fourier(s, true); };
    fx = std::max(fx, distance(F(logical_X(Fd(psi))), logical_Z(psi)));
    fz = std::max(fz, distance(F(logical_Z(Fd(psi))), logical_pauli(psi, Pauli::x, true)));
    // S X S^dag = i X Z (= -i Z X).
    WaveFunction1D ixz = logical_X(logical_Z(psi));
    ixz.amplitudes *= Complex(0, 1);
    sx = std::max(sx, distance(shear(logical_X(shear(psi, true))), ixz));
  }
  const GridSpec g = make_grid(fig_ell(), 64, 8);
  const CombParams p{0.05 * g.ell, 0.05 / g.ell, CombOffset::zero};
  const std::array<WaveFunction1D, 2> basis{logical_state(g, p, {0, 0}), logical_state(g, p, {kPi, 0})};
  double worst_fid = 1.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Eigen::Matrix4cd rho = logical_density(cnot(tensor(basis[a], basis[b])));
      const int out = 2 * a + (a ^ b);
      worst_fid = std::min(worst_fid, rho(out, out).real());
    }
  }
  v.pass = fx < 1e-8 && fz < 1e-8 && sx < 1e-8 && worst_fid > 0.999;
  v.detail << "FXF^dag-Z " << fx << ", FZF^dag-X^dag " << fz << ", SXS^dag-iXZ " << sx << ", CNOT logical fidelity "
           << worst_fid;
  return v;
}

Eigen::Matrix3d so3(const Eigen::Vector3d& n, double a) { return Eigen::AngleAxisd(a, n).toRotationMatrix(); }

Verdict rotations() {
  Verdict v;
  const GridSpec& g = grid();
  const CombParams p{0.05 * g.ell, 0.05 / g.ell, CombOffset::zero};
  const auto bloch = [&](const WaveFunction1D& s) { return bloch_estimate(s, obs("ReX"), obs("ReY"), obs("ReZ")).bloch; };
  Rng rng(1008);
  double worst = 0.0, square = 0.0;
  const std::array axes{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)};
  for (int k = 0; k < 3; ++k) {
    const auto psi = logical_state(g, p, random_bloch_angles(rng));
    const Eigen::Vector3d before = bloch(psi);
    for (const auto& n : axes) {
      const RotationAxis axis(n.x(), n.y(), n.z());
      for (double a : {kPi / 4, kPi / 2, kPi}) {
        // cos(a/2) + i sin(a/2) n.Gamma turns the Bloch vector by -a about n.
        worst = std::max(worst, (bloch(rotate(psi, axis, a)) - so3(n, -a) * before).cwiseAbs().maxCoeff());
      }
      square = std::max(square, distance(gamma1_dot(gamma1_dot(psi, axis), axis), psi));
    }
  }
  v.pass = worst < 1e-2 && square < 1e-12;
  v.detail << "max Bloch deviation " << worst << ", (Gamma.n)^2 - 1 " << square;
  return v;
}

Verdict povm() {
  Verdict v;
  double exact = 0.0;
  for (const auto& psi : testing::random_states(grid(), 5, 1009)) {
    for (const auto& name : builtin_observable_names()) {
      const auto o = obs(name);
      const Gate u = o.step ? named_gate(name) : arccos_gate(grid(), o);
      exact = std::max(exact, std::abs(povm_measure(psi, u).expectation - expectation(psi, o)));
    }
  }
  const auto psi = testing::random_states(grid(), 1, 1010)[0];
  const double p_plus = povm_measure(psi, arccos_gate(grid(), obs("ReX"))).p_plus;
  const double sigma = sampling_standard_error(p_plus, 100000);
  double worst_sigmas = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const double est = sample_counts(p_plus, 100000, seed).estimate();
    worst_sigmas = std::max(worst_sigmas, std::abs(est - (2 * p_plus - 1)) / sigma);
  }
  v.pass = exact < 1e-8 && worst_sigmas < 4.0;
  v.detail << "exact mismatch " << exact << ", worst sampled deviation " << worst_sigmas << " sigma (p+ = " << p_plus
           << ")";
  return v;
}

Verdict certification() {
  Verdict v;
  const bool builtin = obs("ReZ").beta_class == BetaClass::z && obs("ReX").beta_class == BetaClass::x &&
                       obs("ReY").beta_class == BetaClass::y;
  const auto mutate = [](const std::string& base, int n, int m) {
    auto o = obs(base);
    auto c = o.coeffs;
    for (auto& [k, d] : c) d *= 0.8;
    c[{n, m}] += 0.1;
    c[{-n, -m}] += 0.1;
    return certify_class(make_observable(base, c, o.L, o.Lp), grid());
  };
  const bool mutants = mutate("ReZ", 2, 0) == BetaClass::none && mutate("ReX", 1, 0) == BetaClass::none &&
                       mutate("ReY", 2, 2) == BetaClass::none && mutate("ReY", 0, 1) == BetaClass::none;
  v.pass = builtin && mutants;
  v.detail << "builtins " << to_string(obs("ReZ").beta_class) << "/" << to_string(obs("ReX").beta_class) << "/"
           << to_string(obs("ReY").beta_class) << ", mutants rejected " << (mutants ? "yes" : "no");
  return v;
}

Verdict cli() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path out = fs::temp_directory_path() / "modvar_acceptance_fig2";
  fs::remove_all(out);
  const std::string cmd = std::string("\"") + MODVAR_CLI + "\" run \"" + MODVAR_SOURCE_DIR +
                          "/scripts/fig2.mv\" --out-dir \"" + out.string() + "\" > /dev/null";
  const int status = std::system(cmd.c_str());
  int checks = 0, failed = 0;
  std::ifstream report(out / "report.jsonl");
  std::string line;
  while (std::getline(report, line)) {
    const auto rec = nlohmann::json::parse(line);
    if (rec.contains("pass")) {
      ++checks;
      if (!rec["pass"].get<bool>()) ++failed;
    }
  }
  v.pass = status == 0 && checks > 0 && failed == 0;
  v.detail << "exit status " << status << ", " << checks << " checks, " << failed << " failed";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"zak unitarity", zak_unitarity},
      {"gaussian comb separability", separability},
      {"pauli algebra", pauli_algebra},
      {"Z^2 invisibility", z2_invisibility},
      {"bloch ball bound", bloch_ball},
      {"expectation path agreement", expectation_paths},
      {"clifford conjugation and CNOT", clifford},
      {"rotations", rotations},
      {"povm equivalence", povm},
      {"observable certification", certification},
      {"cli end to end", cli},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << v.detail.str() << " ("
              << secs << " s)" << std::endl;
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
