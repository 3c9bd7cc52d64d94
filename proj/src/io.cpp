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

#include "modvar/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace modvar {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

nlohmann::ordered_json grid_json(const GridSpec& g) {
  return {{"ell", g.ell}, {"M", g.points_per_period}, {"P", g.period_count}};
}

const char* rep_name(Representation rep) {
  switch (rep) {
    case Representation::position:
      return "position";
    case Representation::momentum:
      return "momentum";
    case Representation::quadrature:
      break;
  }
  return "quadrature";
}

const char* axis_label(Representation rep) {
  switch (rep) {
    case Representation::position:
      return "x";
    case Representation::momentum:
      return "p";
    case Representation::quadrature:
      break;
  }
  return "q";
}

void write_sidecar(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  auto out = open_out(sidecar(path));
  out << doc.dump(2) << '\n';
}

void put_le_double(std::ofstream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  out.write(bytes, 8);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_wavefunction_csv(const std::filesystem::path& path, const WaveFunction1D& psi) {
  auto out = open_out(path);
  const char* label = axis_label(psi.rep);
  out << label << ",re,im\n";
  const double h = psi.spacing();
  const Eigen::Index n = psi.grid.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    out << format_double(static_cast<double>(i - n / 2) * h) << ',' << format_double(psi.amplitudes[i].real())
        << ',' << format_double(psi.amplitudes[i].imag()) << '\n';
  }
  nlohmann::ordered_json doc;
  doc["grid"] = grid_json(psi.grid);
  doc["representation"] = rep_name(psi.rep);
  doc["angle"] = psi.angle;
  doc["columns"] = {label, "re", "im"};
  doc["normalization"] = "sum |amp|^2 * spacing == 1";
  write_sidecar(path, doc);
}

WaveFunction1D read_wavefunction_csv(const std::filesystem::path& path) {
  std::ifstream meta(sidecar(path));
  if (!meta) throw Error("missing sidecar '" + sidecar(path).string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(meta);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("sidecar: ") + e.what());
  }
  const GridSpec grid = make_grid(doc.at("grid").at("ell").get<double>(), doc.at("grid").at("M").get<int>(),
                                  doc.at("grid").at("P").get<int>());
  const std::string rep = doc.at("representation").get<std::string>();
  WaveFunction1D psi{grid, CVector(grid.size()), Representation::position, doc.at("angle").get<double>()};
  if (rep == "momentum") psi.rep = Representation::momentum;
  if (rep == "quadrature") psi.rep = Representation::quadrature;

  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);  // header
  Eigen::Index i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= grid.size()) throw Error("csv: more rows than grid points");
    std::istringstream row(line);
    std::string q, re, im;
    std::getline(row, q, ',');
    std::getline(row, re, ',');
    std::getline(row, im, ',');
    psi.amplitudes[i++] = Complex(std::stod(re), std::stod(im));
  }
  if (i != grid.size()) throw Error("csv: fewer rows than grid points");
  return psi;
}

void write_density_csv(const std::filesystem::path& path, const WaveFunction1D& psi,
                       QuadratureAngle angle) {
  write_density_csv(path, psi.grid, angle, fractional_fourier(psi, angle).amplitudes.cwiseAbs2());
}

void write_density_csv(const std::filesystem::path& path, const GridSpec& grid,
                       QuadratureAngle angle, const RVector& density) {
  if (density.size() != grid.size()) throw Error("density: size does not match the grid");
  const double h =
      WaveFunction1D{grid, CVector(), Representation::quadrature, angle.radians()}.spacing();
  const Eigen::Index n = grid.size();
  auto out = open_out(path);
  out << "q,density\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    out << format_double(static_cast<double>(i - n / 2) * h) << ',' << format_double(density[i])
        << '\n';
  }
  nlohmann::ordered_json doc;
  doc["grid"] = grid_json(grid);
  doc["angle"] = angle.radians();
  doc["columns"] = {"q", "density"};
  doc["normalization"] = "sum density * spacing == 1";
  write_sidecar(path, doc);
}

void write_modular_csv(const std::filesystem::path& path, const ModularWaveFunction& mwf) {
  auto out = open_out(path);
  out << "xbar,pbar,re,im\n";
  for (Eigen::Index j = 0; j < mwf.amplitudes.rows(); ++j) {
    for (Eigen::Index k = 0; k < mwf.amplitudes.cols(); ++k) {
      out << format_double(mwf.xbar(j)) << ',' << format_double(mwf.pbar(k)) << ','
          << format_double(mwf.amplitudes(j, k).real()) << ','
          << format_double(mwf.amplitudes(j, k).imag()) << '\n';
    }
  }
  nlohmann::ordered_json doc;
  doc["grid"] = grid_json(mwf.grid);
  doc["columns"] = {"xbar", "pbar", "re", "im"};
  write_sidecar(path, doc);
}

void write_two_mode_csv(const std::filesystem::path& path, const WaveFunction2D& psi,
                        double threshold) {
  auto out = open_out(path);
  out << "x1,x2,re,im\n";
  for (Eigen::Index a = 0; a < psi.amplitudes.rows(); ++a) {
    for (Eigen::Index b = 0; b < psi.amplitudes.cols(); ++b) {
      const Complex v = psi.amplitudes(a, b);
      if (std::abs(v) <= threshold) continue;
      out << format_double(psi.grid1.position(a)) << ',' << format_double(psi.grid2.position(b))
          << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
  nlohmann::ordered_json doc;
  doc["grid1"] = grid_json(psi.grid1);
  doc["grid2"] = grid_json(psi.grid2);
  doc["columns"] = {"x1", "x2", "re", "im"};
  doc["threshold"] = threshold;
  write_sidecar(path, doc);
}

void write_two_mode_binary(const std::filesystem::path& path, const WaveFunction2D& psi) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  for (Eigen::Index a = 0; a < psi.amplitudes.rows(); ++a) {
    for (Eigen::Index b = 0; b < psi.amplitudes.cols(); ++b) {
      put_le_double(out, psi.amplitudes(a, b).real());
      put_le_double(out, psi.amplitudes(a, b).imag());
    }
  }
  nlohmann::ordered_json doc;
  doc["grid1"] = grid_json(psi.grid1);
  doc["grid2"] = grid_json(psi.grid2);
  doc["layout"] = "row-major over (x1, x2); each amplitude = re, im as little-endian float64";
  write_sidecar(path, doc);
}

}  // namespace modvar
