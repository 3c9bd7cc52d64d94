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

#include <filesystem>
#include <string>

#include "modvar/grid.hpp"
#include "modvar/modular.hpp"
#include "modvar/two_mode.hpp"

namespace modvar {

/// "%.17g": round-trips every double.
std::string format_double(double v);

/// CSV `x,re,im` (or `p,re,im`, `q,re,im` for rotated quadratures) plus a
/// `<path>.json` sidecar with the grid and representation.
void write_wavefunction_csv(const std::filesystem::path& path, const WaveFunction1D& psi);
/// Reads a file written by write_wavefunction_csv (sidecar required).
WaveFunction1D read_wavefunction_csv(const std::filesystem::path& path);

/// CSV `q,density` of the quadrature at `angle`.
void write_density_csv(const std::filesystem::path& path, const WaveFunction1D& psi,
                       QuadratureAngle angle);

/// Same for an already computed density sampled on the quadrature grid.
void write_density_csv(const std::filesystem::path& path, const GridSpec& grid,
                       QuadratureAngle angle, const RVector& density);

/// CSV `xbar,pbar,re,im`, xbar-major.
void write_modular_csv(const std::filesystem::path& path, const ModularWaveFunction& mwf);

/// Sparse CSV `x1,x2,re,im` of amplitudes with |a| > threshold.
void write_two_mode_csv(const std::filesystem::path& path, const WaveFunction2D& psi,
                        double threshold = 1e-12);

/// Dense dump: N1*N2 amplitudes, row-major (mode 1 outer), each as two
/// little-endian IEEE-754 doubles (re, im). No header; see the JSON sidecar.
void write_two_mode_binary(const std::filesystem::path& path, const WaveFunction2D& psi);

}  // namespace modvar
