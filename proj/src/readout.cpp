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

#include "modvar/readout.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "modvar/expr.hpp"

namespace modvar {

namespace {

constexpr double kDropCoefficient = 1e-14;

Eigen::Index floor_div(Eigen::Index a, Eigen::Index b) {
  Eigen::Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool whole(double v) { return std::abs(v - std::round(v)) < 1e-9 * std::max(1.0, std::abs(v)); }

double positive_fraction(double t) { return t - std::floor(t); }

// +1 on [-L/4, L/4) mod L. The nudge keeps grid points off the discontinuities.
double square_wave(double value, double period) {
  return positive_fraction(value / period + 0.25 + 1e-9) < 0.5 ? 1.0 : -1.0;
}

Eigen::Matrix2cd pauli_matrix(Pauli which) {
  Eigen::Matrix2cd s;
  switch (which) {
    case Pauli::x:
      s << 0.0, 1.0, 1.0, 0.0;
      break;
    case Pauli::y:
      s << 0.0, -kI, kI, 0.0;
      break;
    case Pauli::z:
      s << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return s;
}

// zeta if m == zeta * sigma_beta with real zeta, within tol.
std::optional<double> pauli_coefficient(const Eigen::Matrix2cd& m, BetaClass beta, double tol) {
  Complex zeta;
  switch (beta) {
    case BetaClass::z:
      if (std::abs(m(0, 1)) > tol || std::abs(m(1, 0)) > tol) return std::nullopt;
      if (std::abs(m(0, 0) + m(1, 1)) > tol) return std::nullopt;
      zeta = m(0, 0);
      break;
    case BetaClass::x:
      if (std::abs(m(0, 0)) > tol || std::abs(m(1, 1)) > tol) return std::nullopt;
      if (std::abs(m(0, 1) - m(1, 0)) > tol) return std::nullopt;
      zeta = m(0, 1);
      break;
    case BetaClass::y:
      if (std::abs(m(0, 0)) > tol || std::abs(m(1, 1)) > tol) return std::nullopt;
      if (std::abs(m(0, 1) + m(1, 0)) > tol) return std::nullopt;
      zeta = kI * m(0, 1);
      break;
    case BetaClass::none:
      return std::nullopt;
  }
  if (std::abs(zeta.imag()) > tol) return std::nullopt;
  return zeta.real();
}

BetaClass class_of(Pauli p) {
  switch (p) {
    case Pauli::x:
      return BetaClass::x;
    case Pauli::y:
      return BetaClass::y;
    case Pauli::z:
      break;
  }
  return BetaClass::z;
}

double certification_tolerance(const PhaseSpaceObservable& obs) {
  return tol::kAlgebraic * std::max(1.0, obs.coefficient_l1());
}

void require_certified(const PhaseSpaceObservable& obs, const char* what) {
  if (obs.beta_class == BetaClass::none) {
    throw Error(std::string(what) + ": observable '" + obs.name + "' is not certified as x, y or z");
  }
}

WaveFunction1D apply_step(const WaveFunction1D& psi, Pauli which) {
  switch (which) {
    case Pauli::x:
      return gamma1_step(psi, StepAxis::x);
    case Pauli::z:
      return gamma1_step(psi, StepAxis::z);
    case Pauli::y:
      break;
  }
  return gamma1_y(psi);
}

double quadrature_spacing(const GridSpec& grid, QuadratureAngle angle) {
  return WaveFunction1D{grid, CVector(), Representation::quadrature, angle.radians()}.spacing();
}

double length_field(const nlohmann::json& v, const GridSpec& grid, const char* key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return evaluate_expression(v.get<std::string>(), {{"ell", grid.ell}});
  throw Error(std::string("observable: field '") + key + "' must be a number or an expression");
}

}  // namespace

const char* to_string(BetaClass beta) {
  switch (beta) {
    case BetaClass::x:
      return "x";
    case BetaClass::y:
      return "y";
    case BetaClass::z:
      return "z";
    case BetaClass::none:
      break;
  }
  return "none";
}

double PhaseSpaceObservable::coefficient_l1() const {
  if (step) return 1.0;
  double s = 0.0;
  for (const auto& [key, d] : coeffs) s += std::abs(d);
  return s;
}

double PhaseSpaceObservable::coefficient_l2() const {
  if (step) return 1.0;
  double s = 0.0;
  for (const auto& [key, d] : coeffs) s += std::norm(d);
  return s;
}

PhaseSpaceObservable make_observable(std::string name,
                                     std::map<PhaseSpaceObservable::Index, Complex> coeffs,
                                     double L, double Lp) {
  if (!(L > 0.0) || !std::isfinite(L) || !(Lp > 0.0) || !std::isfinite(Lp)) {
    throw Error("observable '" + name + "': L and Lp must be positive and finite");
  }
  PhaseSpaceObservable obs;
  obs.name = std::move(name);
  obs.L = L;
  obs.Lp = Lp;
  for (const auto& [key, d] : coeffs) {
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) {
      throw Error("observable '" + obs.name + "': non-finite coefficient");
    }
    if (std::abs(d) >= kDropCoefficient) obs.coeffs[key] = d;
  }
  for (const auto& [key, d] : obs.coeffs) {
    const auto it = obs.coeffs.find({-key.first, -key.second});
    const Complex mirror = it == obs.coeffs.end() ? Complex(0.0) : it->second;
    if (std::abs(mirror - std::conj(d)) > 1e-12) {
      std::ostringstream msg;
      msg << "observable '" << obs.name << "': not Hermitian, d(" << -key.first << ","
          << -key.second << ") must equal conj(d(" << key.first << "," << key.second << "))";
      throw Error(msg.str());
    }
  }
  if (obs.coefficient_l1() > 1.0 + 1e-12) {
    throw Error("observable '" + obs.name + "': sum of |d| exceeds 1, spectrum not bounded by 1");
  }
  return obs;
}

const std::vector<std::string>& builtin_observable_names() {
  static const std::vector<std::string> names{"ReX", "ReY", "ReZ", "G1X", "G1Y", "G1Z"};
  return names;
}

PhaseSpaceObservable builtin_observable(const std::string& name, const GridSpec& grid) {
  const double ell = grid.ell;
  PhaseSpaceObservable obs;
  if (name == "ReZ") {
    obs = make_observable(name, {{{1, 0}, 0.5}, {{-1, 0}, 0.5}}, ell, ell);
  } else if (name == "ReX") {
    obs = make_observable(name, {{{0, 1}, 0.5}, {{0, -1}, 0.5}}, ell / 2.0, ell / 2.0);
  } else if (name == "ReY") {
    // (Y + Y^dagger) / 2 with Y = D(-ell/2, -2 pi/ell).
    obs = make_observable(name, {{{1, 1}, 0.5}, {{-1, -1}, 0.5}}, ell, ell / 2.0);
  } else if (name == "G1X" || name == "G1Y" || name == "G1Z") {
    obs.name = name;
    obs.L = ell;
    obs.Lp = ell / 2.0;
    obs.step = name == "G1X" ? Pauli::x : name == "G1Y" ? Pauli::y : Pauli::z;
  } else {
    throw Error("unknown observable '" + name + "' (built-ins: ReX ReY ReZ G1X G1Y G1Z)");
  }
  return certified(std::move(obs), grid);
}

PhaseSpaceObservable parse_observable_json(const std::string& text, const GridSpec& grid) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("observable JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("L") || !doc.contains("Lp") || !doc.contains("coeffs")) {
    throw Error("observable JSON: expected an object with L, Lp and coeffs");
  }
  const std::string name = doc.value("name", std::string("custom"));
  std::map<PhaseSpaceObservable::Index, Complex> coeffs;
  for (const auto& row : doc.at("coeffs")) {
    if (!row.is_array() || row.size() != 4 || !row[0].is_number_integer() ||
        !row[1].is_number_integer() || !row[2].is_number() || !row[3].is_number()) {
      throw Error("observable JSON: each coefficient must be [n, m, re, im] with integer n, m");
    }
    const PhaseSpaceObservable::Index key{row[0].get<int>(), row[1].get<int>()};
    if (coeffs.count(key) != 0) throw Error("observable JSON: duplicate coefficient index");
    coeffs[key] = Complex(row[2].get<double>(), row[3].get<double>());
  }
  auto obs = make_observable(name, std::move(coeffs), length_field(doc.at("L"), grid, "L"),
                             length_field(doc.at("Lp"), grid, "Lp"));
  return certified(std::move(obs), grid);
}

std::string observable_to_json(const PhaseSpaceObservable& obs) {
  nlohmann::ordered_json doc;
  doc["name"] = obs.name;
  doc["L"] = obs.L;
  doc["Lp"] = obs.Lp;
  doc["class"] = to_string(obs.beta_class);
  if (obs.step) {
    doc["step"] = to_string(class_of(*obs.step));
    doc["coeffs"] = nlohmann::ordered_json::array();
  } else {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& [key, d] : obs.coeffs) {
      rows.push_back({key.first, key.second, d.real(), d.imag()});
    }
    doc["coeffs"] = rows;
  }
  return doc.dump(2);
}

Eigen::Matrix2cd fiber_matrix(const PhaseSpaceObservable& obs, const GridSpec& grid,
                              Eigen::Index j, Eigen::Index k) {
  const Eigen::Index per = grid.points_per_period;
  const Eigen::Index half = per / 2;
  if (j < 0 || j >= half || k < 0 || k >= grid.period_count) {
    throw Error("fiber_matrix: fiber index out of range");
  }
  if (obs.step) return pauli_matrix(*obs.step);

  const double ell = grid.ell;
  const double pbar = static_cast<double>(k - grid.period_count / 2) * grid.dp();
  // Modified basis kets: b_r = phase[r] |xbar_{start[r]}, pbar>.
  const Eigen::Index start[2] = {j, j + half};
  const Complex phase[2] = {std::polar(1.0, -pbar * ell / 4.0), std::polar(1.0, pbar * ell / 4.0)};

  Eigen::Matrix2cd g = Eigen::Matrix2cd::Zero();
  for (const auto& [key, d] : obs.coeffs) {
    const double a = obs.Lp * key.second;
    const double b = kTwoPi * key.first / obs.L;
    if (!whole(b * ell / kTwoPi)) throw Error("fiber_matrix: momentum kick leaves the fiber");
    const Eigen::Index steps = detail::commensurate_steps(a, grid.dx(), "fiber_matrix");
    if (steps % half != 0) throw Error("fiber_matrix: position shift leaves the fiber");
    for (int c = 0; c < 2; ++c) {
      const Eigen::Index shifted = start[c] + steps;
      const Eigen::Index wraps = floor_div(shifted, per);
      const Eigen::Index landing = shifted - wraps * per;
      const int r = landing == j ? 0 : 1;
      const double xbar = -ell / 4.0 + static_cast<double>(start[c]) * grid.dx();
      const double angle = -a * b / 2.0 + b * (xbar + a) - pbar * static_cast<double>(wraps) * ell;
      g(r, c) += d * phase[c] * std::polar(1.0, angle) * std::conj(phase[r]);
    }
  }
  return g;
}

BetaClass certify_class(const PhaseSpaceObservable& obs, const GridSpec& grid) {
  if (obs.step) return class_of(*obs.step);
  if (obs.coeffs.empty()) return BetaClass::none;
  const double tol = certification_tolerance(obs);
  bool alive[3] = {true, true, true};
  const BetaClass classes[3] = {BetaClass::x, BetaClass::y, BetaClass::z};
  bool nonzero = false;
  try {
    for (Eigen::Index k = 0; k < grid.period_count; ++k) {
      for (Eigen::Index j = 0; j < grid.points_per_period / 2; ++j) {
        const Eigen::Matrix2cd g = fiber_matrix(obs, grid, j, k);
        if (g.cwiseAbs().maxCoeff() > tol) nonzero = true;
        for (int c = 0; c < 3; ++c) {
          if (alive[c] && !pauli_coefficient(g, classes[c], tol)) alive[c] = false;
        }
        if (!alive[0] && !alive[1] && !alive[2]) return BetaClass::none;
      }
    }
  } catch (const Error&) {
    return BetaClass::none;
  }
  if (!nonzero) return BetaClass::none;
  int count = 0;
  BetaClass found = BetaClass::none;
  for (int c = 0; c < 3; ++c) {
    if (alive[c]) {
      ++count;
      found = classes[c];
    }
  }
  return count == 1 ? found : BetaClass::none;
}

PhaseSpaceObservable certified(PhaseSpaceObservable obs, const GridSpec& grid) {
  obs.beta_class = certify_class(obs, grid);
  return obs;
}

RMatrix zeta_function(const PhaseSpaceObservable& obs, const GridSpec& grid) {
  require_certified(obs, "zeta_function");
  const Eigen::Index half = grid.points_per_period / 2;
  if (obs.step) return RMatrix::Ones(half, grid.period_count);
  const double tol = certification_tolerance(obs);
  RMatrix zeta(half, grid.period_count);
  for (Eigen::Index k = 0; k < grid.period_count; ++k) {
    for (Eigen::Index j = 0; j < half; ++j) {
      const auto z = pauli_coefficient(fiber_matrix(obs, grid, j, k), obs.beta_class, tol);
      if (!z) throw Error("zeta_function: observable '" + obs.name + "' is not of its class on this grid");
      zeta(j, k) = *z;
    }
  }
  return zeta;
}

double expectation(const WaveFunction1D& psi, const PhaseSpaceObservable& obs) {
  detail::require_position(psi, "expectation");
  Complex acc(0.0);
  if (obs.step) {
    acc = overlap(psi, apply_step(psi, *obs.step));
  } else {
    for (const auto& [key, d] : obs.coeffs) {
      const Displacement disp{obs.Lp * key.second, kTwoPi * key.first / obs.L};
      acc += d * overlap(psi, displace(psi, disp));
    }
  }
  const double scale = std::max(1.0, obs.coefficient_l1()) * std::max(1.0, psi.norm_squared());
  if (std::abs(acc.imag()) > tol::kAlgebraic * scale) {
    throw InternalError("expectation: imaginary residue " + std::to_string(acc.imag()) +
                        " for a Hermitian observable");
  }
  return acc.real();
}

double expectation(const WaveFunction2D& joint, const PhaseSpaceObservable& obs, int mode) {
  auto apply = [&](auto&& fn) {
    const WaveFunction2D moved = apply_to_mode(joint, mode, fn);
    return joint.amplitudes.cwiseProduct(moved.amplitudes.conjugate()).sum();
  };
  Complex acc(0.0);
  if (obs.step) {
    const Pauli which = *obs.step;
    acc = std::conj(apply([which](const WaveFunction1D& s) { return apply_step(s, which); }));
  } else {
    for (const auto& [key, d] : obs.coeffs) {
      const Displacement disp{obs.Lp * key.second, kTwoPi * key.first / obs.L};
      acc += d * std::conj(apply([disp](const WaveFunction1D& s) { return displace(s, disp); }));
    }
  }
  acc *= joint.cell_area();
  const double scale = std::max(1.0, obs.coefficient_l1()) * std::max(1.0, joint.norm_squared());
  if (std::abs(acc.imag()) > tol::kAlgebraic * scale) {
    throw InternalError("expectation: imaginary residue for a Hermitian observable");
  }
  return acc.real();
}

double expectation_modular(const ModularWaveFunction& mwf, const PhaseSpaceObservable& obs) {
  require_certified(obs, "expectation_modular");
  const LogicalDecomposition q = extract_qubit(mwf, QubitGauge::modified);
  const RMatrix zeta = zeta_function(obs, mwf.grid);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < q.f.cols(); ++k) {
    for (Eigen::Index j = 0; j < q.f.rows(); ++j) {
      const double th = q.theta(j, k);
      const double ph = q.phi(j, k);
      double component = std::cos(th);
      if (obs.beta_class == BetaClass::x) component = std::sin(th) * std::cos(ph);
      if (obs.beta_class == BetaClass::y) component = std::sin(th) * std::sin(ph);
      acc += zeta(j, k) * std::norm(q.f(j, k)) * component;
    }
  }
  return acc * q.cell_area();
}

std::optional<QuadratureForm> quadrature_form(const PhaseSpaceObservable& obs) {
  if (obs.step) {
    if (*obs.step == Pauli::y) return std::nullopt;
    const bool is_z = *obs.step == Pauli::z;
    const double period = is_z ? obs.L : kTwoPi / obs.Lp;  // ell or 4 pi / ell
    return QuadratureForm{QuadratureAngle(is_z ? 0.0 : kPi / 2.0),
                          [period](double v) { return square_wave(v, period); }};
  }
  // Each term is exp(i (b x - a p)) = exp(i c x_phi) once all (b, -a) are parallel.
  Eigen::Vector2d direction = Eigen::Vector2d::Zero();
  for (const auto& [key, d] : obs.coeffs) {
    const Eigen::Vector2d v(kTwoPi * key.first / obs.L, -obs.Lp * key.second);
    if (v.norm() == 0.0) continue;
    if (direction.isZero()) {
      direction = v / v.norm();
      if (direction.x() < 0.0 || (direction.x() == 0.0 && direction.y() < 0.0)) direction = -direction;
    }
    const double cross = direction.x() * v.y() - direction.y() * v.x();
    if (std::abs(cross) > 1e-12 * v.norm()) return std::nullopt;
  }
  if (direction.isZero()) direction = Eigen::Vector2d(1.0, 0.0);
  std::vector<std::pair<double, Complex>> terms;
  for (const auto& [key, d] : obs.coeffs) {
    const Eigen::Vector2d v(kTwoPi * key.first / obs.L, -obs.Lp * key.second);
    terms.emplace_back(v.dot(direction), d);
  }
  const double phi = std::atan2(direction.y(), direction.x());
  return QuadratureForm{QuadratureAngle(phi), [terms](double x) {
                          Complex s(0.0);
                          for (const auto& [c, d] : terms) s += d * std::polar(1.0, c * x);
                          return s.real();
                        }};
}

double expectation_quadrature(const WaveFunction1D& psi, const PhaseSpaceObservable& obs) {
  const auto form = quadrature_form(obs);
  if (!form) throw Error("expectation_quadrature: '" + obs.name + "' is not quadrature-diagonal");
  const WaveFunction1D rotated = fractional_fourier(psi, form->angle);
  const double h = rotated.spacing();
  const Eigen::Index n = psi.grid.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += form->function(static_cast<double>(i - n / 2) * h) * std::norm(rotated.amplitudes[i]);
  }
  return acc * h;
}

double k_factor(const LogicalDecomposition& decomp, const PhaseSpaceObservable& obs) {
  if (decomp.split != QubitSplit::position) {
    throw Error("k_factor: needs the position-split decomposition");
  }
  const RMatrix zeta = zeta_function(obs, decomp.grid);
  return (zeta.array() * decomp.f.cwiseAbs2().array()).sum() * decomp.cell_area();
}

BlochEstimate bloch_estimate(const WaveFunction1D& psi, const PhaseSpaceObservable& obs_x,
                             const PhaseSpaceObservable& obs_y, const PhaseSpaceObservable& obs_z) {
  const PhaseSpaceObservable* obs[3] = {&obs_x, &obs_y, &obs_z};
  const BetaClass want[3] = {BetaClass::x, BetaClass::y, BetaClass::z};
  for (int c = 0; c < 3; ++c) {
    if (obs[c]->beta_class != want[c]) {
      throw Error(std::string("bloch_estimate: observable '") + obs[c]->name + "' has class " +
                  to_string(obs[c]->beta_class) + ", expected " + to_string(want[c]));
    }
  }
  const LogicalDecomposition q = extract_qubit(zak_transform(psi));
  BlochEstimate out;
  double zeta_max = 0.0;
  for (int c = 0; c < 3; ++c) {
    out.gamma[c] = expectation(psi, *obs[c]);
    out.k[c] = k_factor(q, *obs[c]);
    out.bloch[c] = std::abs(out.k[c]) > 1e-12 ? out.gamma[c] / out.k[c] : 0.0;
    zeta_max = std::max(zeta_max, zeta_function(*obs[c], psi.grid).cwiseAbs().maxCoeff());
  }
  const double bound = zeta_max * psi.norm_squared();
  if (out.gamma.norm() > bound + 1e-10) {
    throw InternalError("bloch_estimate: |gamma| exceeds the Bloch-ball bound");
  }
  return out;
}

double correlator(const WaveFunction2D& joint, const PhaseSpaceObservable& obs1,
                  const PhaseSpaceObservable& obs2) {
  const auto f1 = quadrature_form(obs1);
  const auto f2 = quadrature_form(obs2);
  if (!f1 || !f2) throw Error("correlator: observables must be quadrature-diagonal");
  const RMatrix density = joint_quadrature_density(joint, f1->angle, f2->angle);
  const double h1 = quadrature_spacing(joint.grid1, f1->angle);
  const double h2 = quadrature_spacing(joint.grid2, f2->angle);
  const Eigen::Index n1 = joint.grid1.size();
  const Eigen::Index n2 = joint.grid2.size();
  RVector v1(n1);
  RVector v2(n2);
  for (Eigen::Index i = 0; i < n1; ++i) v1[i] = f1->function(static_cast<double>(i - n1 / 2) * h1);
  for (Eigen::Index i = 0; i < n2; ++i) v2[i] = f2->function(static_cast<double>(i - n2 / 2) * h2);
  return v1.dot(density * v2) * h1 * h2;
}

Eigen::Matrix2cd logical_density(const WaveFunction1D& psi) {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Identity();
  const double n2 = psi.norm_squared();
  for (Pauli b : {Pauli::x, Pauli::y, Pauli::z}) {
    rho += overlap(psi, apply_step(psi, b)).real() / n2 * pauli_matrix(b);
  }
  return rho / 2.0;
}

Eigen::Matrix4cd logical_density(const WaveFunction2D& joint) {
  const Pauli all[4] = {Pauli::x, Pauli::y, Pauli::z, Pauli::z};
  const double n2 = joint.norm_squared();
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  // a, b == 3 stands for the identity.
  std::vector<WaveFunction2D> first;
  for (int a = 0; a < 4; ++a) {
    first.push_back(a == 3 ? joint : apply_to_mode(joint, 0, [&](const WaveFunction1D& s) {
      return apply_step(s, all[a]);
    }));
  }
  for (int a = 0; a < 4; ++a) {
    const Eigen::Matrix2cd sa = a == 3 ? Eigen::Matrix2cd::Identity() : pauli_matrix(all[a]);
    for (int b = 0; b < 4; ++b) {
      const WaveFunction2D moved =
          b == 3 ? first[a]
                 : apply_to_mode(first[a], 1, [&](const WaveFunction1D& s) { return apply_step(s, all[b]); });
      const double value =
          (joint.amplitudes.conjugate().cwiseProduct(moved.amplitudes)).sum().real() * joint.cell_area() / n2;
      const Eigen::Matrix2cd sb = b == 3 ? Eigen::Matrix2cd::Identity() : pauli_matrix(all[b]);
      Eigen::Matrix4cd kron;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) kron.block<2, 2>(2 * i, 2 * j) = sa(i, j) * sb;
      }
      rho += value * kron;
    }
  }
  return rho / 4.0;
}

}  // namespace modvar
