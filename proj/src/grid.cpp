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

#include "modvar/grid.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace modvar {

namespace {

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

bool same_double(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

// Chirp-shear realization of exp(-i beta (x^2 + p^2 - 1)/2) for |beta| <= pi/4
// on a symmetric grid: x-chirp, p-chirp, x-chirp.
CVector shear_rotation(const CVector& in, const GridSpec& grid, double beta) {
  const double t = std::tan(beta / 2.0);
  const double s = std::sin(beta);
  const RVector x = grid.positions();
  const RVector p = grid.momenta();
  const CVector x_chirp =
      (x.array().square() * (-0.5 * t)).unaryExpr([](double a) { return std::polar(1.0, a); });
  const CVector p_chirp =
      (p.array().square() * (-0.5 * s)).unaryExpr([](double a) { return std::polar(1.0, a); });
  CVector v = in.cwiseProduct(x_chirp);
  v = detail::centered_dft(v).cwiseProduct(p_chirp);
  v = detail::centered_dft(v, /*inverse=*/true).cwiseProduct(x_chirp);
  return v * std::polar(1.0, beta / 2.0);
}

}  // namespace

RVector GridSpec::positions() const {
  RVector x(size());
  for (Eigen::Index j = 0; j < size(); ++j) x[j] = position(j);
  return x;
}

RVector GridSpec::momenta() const {
  RVector p(size());
  for (Eigen::Index k = 0; k < size(); ++k) p[k] = momentum(k);
  return p;
}

bool GridSpec::symmetric() const { return same_double(dx(), dp()); }

GridSpec make_grid(double ell, int points_per_period, int period_count) {
  if (!(ell > 0.0) || !std::isfinite(ell)) {
    throw Error("grid: ell must be a positive finite length");
  }
  if (points_per_period <= 0 || points_per_period % 4 != 0) {
    std::ostringstream msg;
    msg << "grid: M=" << points_per_period << " must be a positive multiple of 4";
    throw Error(msg.str());
  }
  if (period_count <= 0 || period_count % 2 != 0) {
    std::ostringstream msg;
    msg << "grid: P=" << period_count << " must be a positive even integer";
    throw Error(msg.str());
  }
  GridSpec grid{ell, points_per_period, period_count};
  if (static_cast<std::size_t>(grid.size()) > kMaxGridPoints) {
    throw Error("grid: M*P exceeds the cap of 2^22 points");
  }
  return grid;
}

double WaveFunction1D::spacing() const {
  switch (rep) {
    case Representation::position:
      return grid.dx();
    case Representation::momentum:
      return grid.dp();
    case Representation::quadrature: {
      // Odd quarter turns on a non-symmetric grid land on the momentum grid.
      const double quarter = angle / (kPi / 2.0);
      const bool odd = std::abs(quarter - std::round(quarter)) < 1e-12 &&
                       (static_cast<long>(std::llround(quarter)) % 2 != 0);
      return odd ? grid.dp() : grid.dx();
    }
  }
  return grid.dx();
}

QuadratureAngle::QuadratureAngle(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  radians_ = r;
}

WaveFunction1D make_wavefunction(const GridSpec& grid, CVector amplitudes) {
  if (amplitudes.size() != grid.size()) {
    throw Error("wavefunction: amplitude count does not match the grid");
  }
  return WaveFunction1D{grid, std::move(amplitudes), Representation::position, 0.0};
}

WaveFunction1D normalized(WaveFunction1D psi) {
  const double n2 = psi.norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw Error("wavefunction: cannot normalize a zero or non-finite state");
  }
  psi.amplitudes /= std::sqrt(n2);
  return psi;
}

namespace detail {

CVector centered_dft(const CVector& in, bool inverse) {
  const Eigen::Index n = in.size();
  CVector shifted(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    shifted[j] = (j % 2 == 0) ? in[j] : -in[j];
  }
  if (inverse) shifted = shifted.conjugate();
  CVector out(n);
  fft_engine().fwd(out, shifted);
  if (inverse) out = out.conjugate();
  // exp(+- i pi n/2) from the centering; n/2 may be odd for Zak rows.
  const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
  const double scale = sign / std::sqrt(static_cast<double>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    out[k] *= (k % 2 == 0) ? scale : -scale;
  }
  return out;
}

CVector parity(const CVector& in) {
  const Eigen::Index n = in.size();
  CVector out(n);
  for (Eigen::Index j = 0; j < n; ++j) out[(n - j) % n] = in[j];
  return out;
}

void require_position(const WaveFunction1D& psi, const char* what) {
  if (psi.rep != Representation::position) {
    throw Error(std::string(what) + ": expects a position-representation state");
  }
}

}  // namespace detail

WaveFunction1D to_momentum(const WaveFunction1D& psi) {
  detail::require_position(psi, "to_momentum");
  const double scale = std::sqrt(psi.grid.dx() / psi.grid.dp());
  WaveFunction1D out{psi.grid, detail::centered_dft(psi.amplitudes) * scale,
                     Representation::momentum, kPi / 2.0};
  return out;
}

WaveFunction1D from_momentum(const WaveFunction1D& psi) {
  if (psi.rep != Representation::momentum) {
    throw Error("from_momentum: expects a momentum-representation state");
  }
  const double scale = std::sqrt(psi.grid.dp() / psi.grid.dx());
  return WaveFunction1D{psi.grid, detail::centered_dft(psi.amplitudes, true) * scale,
                        Representation::position, 0.0};
}

WaveFunction1D fractional_fourier(const WaveFunction1D& psi, QuadratureAngle angle) {
  detail::require_position(psi, "fractional_fourier");
  const double alpha = angle.radians();
  const long quarter = std::lround(alpha / (kPi / 2.0));
  const double beta = alpha - static_cast<double>(quarter) * (kPi / 2.0);
  const int turns = static_cast<int>(((quarter % 4) + 4) % 4);
  const bool exact = std::abs(beta) < 1e-15;

  if (exact && turns == 0) return psi;
  if (exact && turns == 1) return to_momentum(psi);
  if (!exact && !psi.grid.symmetric()) {
    throw Error(
        "fractional_fourier: angles off the quarter turns need a symmetric grid "
        "(ell^2 = 2 pi M / P)");
  }

  const double quarter_scale = std::sqrt(psi.grid.dx() / psi.grid.dp());
  CVector v = psi.amplitudes;
  switch (turns) {
    case 1:
      v = detail::centered_dft(v) * quarter_scale;
      break;
    case 2:
      v = detail::parity(v);
      break;
    case 3:
      v = detail::centered_dft(v, /*inverse=*/true) * quarter_scale;
      break;
    default:
      break;
  }
  if (!exact) v = shear_rotation(v, psi.grid, beta);
  return WaveFunction1D{psi.grid, std::move(v), Representation::quadrature, alpha};
}

WaveFunction1D from_quadrature(const WaveFunction1D& psi) {
  if (psi.rep == Representation::position) return psi;
  if (psi.rep == Representation::momentum) return from_momentum(psi);
  const double alpha = psi.angle;
  const long quarter = std::lround(alpha / (kPi / 2.0));
  const double beta = alpha - static_cast<double>(quarter) * (kPi / 2.0);
  const int turns = static_cast<int>(((quarter % 4) + 4) % 4);
  CVector v = psi.amplitudes;
  if (std::abs(beta) >= 1e-15) v = shear_rotation(v, psi.grid, -beta);
  const double quarter_scale = std::sqrt(psi.grid.dp() / psi.grid.dx());
  switch (turns) {
    case 1:
      v = detail::centered_dft(v, /*inverse=*/true) * quarter_scale;
      break;
    case 2:
      v = detail::parity(v);
      break;
    case 3:
      v = detail::centered_dft(v) * quarter_scale;
      break;
    default:
      break;
  }
  return WaveFunction1D{psi.grid, std::move(v), Representation::position, 0.0};
}

RVector quadrature_density(const WaveFunction1D& psi, QuadratureAngle angle) {
  return fractional_fourier(psi, angle).amplitudes.cwiseAbs2();
}

Complex overlap(const WaveFunction1D& a, const WaveFunction1D& b) {
  if (!(a.grid == b.grid)) throw Error("overlap: grid mismatch");
  if (a.rep != b.rep || (a.rep == Representation::quadrature && a.angle != b.angle)) {
    throw Error("overlap: representation mismatch");
  }
  return a.amplitudes.dot(b.amplitudes) * a.spacing();
}

double fidelity(const WaveFunction1D& a, const WaveFunction1D& b) {
  return std::norm(overlap(a, b));
}

}  // namespace modvar
