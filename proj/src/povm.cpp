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

#include "modvar/povm.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "modvar/operators.hpp"
#include "modvar/random.hpp"

namespace modvar {

Gate named_gate(const std::string& name) {
  using W = WaveFunction1D;
  if (name == "I") return {name, [](const W& s) { return s; }};
  if (name == "X") return {name, [](const W& s) { return logical_pauli(s, Pauli::x); }};
  if (name == "Y") return {name, [](const W& s) { return logical_pauli(s, Pauli::y); }};
  if (name == "Z") return {name, [](const W& s) { return logical_pauli(s, Pauli::z); }};
  if (name == "Xdag") return {name, [](const W& s) { return logical_pauli(s, Pauli::x, true); }};
  if (name == "Ydag") return {name, [](const W& s) { return logical_pauli(s, Pauli::y, true); }};
  if (name == "Zdag") return {name, [](const W& s) { return logical_pauli(s, Pauli::z, true); }};
  if (name == "S") return {name, [](const W& s) { return shear(s); }};
  if (name == "Sdag") return {name, [](const W& s) { return shear(s, true); }};
  if (name == "F") return {name, [](const W& s) { return rescaled_fourier(s); }};
  if (name == "Fdag") return {name, [](const W& s) { return rescaled_fourier(s, true); }};
  if (name == "G1X") return {name, [](const W& s) { return gamma1_step(s, StepAxis::x); }};
  if (name == "G1Z") return {name, [](const W& s) { return gamma1_step(s, StepAxis::z); }};
  if (name == "G1Y") return {name, [](const W& s) { return gamma1_y(s); }};
  throw Error("unknown gate '" + name + "'");
}

Gate phase_gate(const GridSpec& grid, RVector h, QuadratureAngle angle) {
  if (h.size() != grid.size()) throw Error("phase_gate: h must have one sample per grid point");
  if (!h.allFinite()) throw Error("phase_gate: h must be finite");
  const CVector diag = h.unaryExpr([](double a) { return std::polar(1.0, a); });
  return {"phase", [diag, angle, grid](const WaveFunction1D& psi) {
            if (!(psi.grid == grid)) throw Error("phase_gate: grid mismatch");
            WaveFunction1D rotated = fractional_fourier(psi, angle);
            rotated.amplitudes = rotated.amplitudes.cwiseProduct(diag);
            return from_quadrature(rotated);
          }};
}

Gate phase_gate(const GridSpec& grid, const std::function<double(double)>& h,
                QuadratureAngle angle) {
  const double spacing =
      WaveFunction1D{grid, CVector(), Representation::quadrature, angle.radians()}.spacing();
  const Eigen::Index n = grid.size();
  RVector samples(n);
  for (Eigen::Index i = 0; i < n; ++i) samples[i] = h(static_cast<double>(i - n / 2) * spacing);
  return phase_gate(grid, std::move(samples), angle);
}

Gate arccos_gate(const GridSpec& grid, const PhaseSpaceObservable& obs) {
  const auto form = quadrature_form(obs);
  if (!form) throw Error("arccos_gate: '" + obs.name + "' is not quadrature-diagonal");
  bool clamped = false;
  auto h = [&](double v) {
    double f = form->function(v);
    if (std::abs(f) > 1.0 + 1e-9) {
      throw Error("arccos_gate: |F| = " + std::to_string(std::abs(f)) + " exceeds 1");
    }
    if (std::abs(f) > 1.0) {
      clamped = true;
      f = std::copysign(1.0, f);
    }
    return std::acos(f);
  };
  Gate g = phase_gate(grid, h, form->angle);
  if (clamped) std::cerr << "warning: arccos_gate clamped |F| slightly above 1\n";
  g.name = "arccos(" + obs.name + ")";
  return g;
}

PovmOutcome povm_measure(const WaveFunction1D& psi, const Gate& u) {
  detail::require_position(psi, "povm_measure");
  const WaveFunction1D upsi = u(psi);
  WaveFunction1D plus{psi.grid, 0.5 * (psi.amplitudes + upsi.amplitudes), Representation::position,
                      0.0};
  WaveFunction1D minus{psi.grid, 0.5 * (psi.amplitudes - upsi.amplitudes), Representation::position,
                       0.0};
  const double n2 = psi.norm_squared();
  if (std::abs(n2 - 1.0) > 1e-8) throw Error("povm_measure: input state is not normalized");
  PovmOutcome out;
  out.p_plus = plus.norm_squared() / n2;
  out.p_minus = minus.norm_squared() / n2;
  const double total = out.p_plus + out.p_minus;
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error("povm_measure: gate '" + u.name + "' is not unitary (p+ + p- = " +
                std::to_string(total) + ")");
  }
  out.expectation = out.p_plus - out.p_minus;
  const double direct = overlap(psi, upsi).real() / n2;
  if (std::abs(out.expectation - direct) > 1e-10) {
    throw InternalError("povm_measure: p+ - p- disagrees with Re<U>");
  }
  if (out.p_plus >= tol::kDegenerate) out.post_plus = normalized(std::move(plus));
  if (out.p_minus >= tol::kDegenerate) out.post_minus = normalized(std::move(minus));
  return out;
}

SampleCounts sample_counts(double p_plus, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw Error("sample: shots must be at least 1");
  Rng rng(seed);
  SampleCounts counts;
  for (std::int64_t s = 0; s < shots; ++s) {
    if (uniform01(rng) < p_plus) {
      ++counts.plus;
    } else {
      ++counts.minus;
    }
  }
  return counts;
}

SampleCounts sample_outcomes(const WaveFunction1D& psi, const Gate& u, std::int64_t shots,
                             std::uint64_t seed) {
  return sample_counts(povm_measure(psi, u).p_plus, shots, seed);
}

double sampling_standard_error(double p_plus, std::int64_t shots) {
  const double p = std::clamp(p_plus, 0.0, 1.0);
  return 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
}

}  // namespace modvar
