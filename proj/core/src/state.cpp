// Copyright 2026 The superrad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superrad/state.hpp"

#include "superrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace superrad {

std::string_view to_string(DeltaMode mode) {
  switch (mode) {
    case DeltaMode::zero:
      return "zero";
    case DeltaMode::kramers_kronig:
      return "kramers-kronig";
  }
  return "zero";
}

std::optional<DeltaMode> parse_delta_mode(std::string_view text) {
  if (text == "zero") return DeltaMode::zero;
  if (text == "kramers-kronig" || text == "kramers_kronig") return DeltaMode::kramers_kronig;
  return std::nullopt;
}

void Parameters::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("invalid parameters: " + msg); };
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail("gamma must be > 0");
  if (!(coop >= 0.0) || !std::isfinite(coop)) fail("coop must be >= 0");
  if (!(rho_size > 0.0) || !std::isfinite(rho_size)) fail("rho_size must be > 0");
  if (!(series_epsilon > 0.0)) fail("series_epsilon must be > 0");
  if (!(fixed_point_tol > 0.0)) fail("fixed_point_tol must be > 0");
}

double TwoAtomDensityMatrix::min_eigenvalue() const {
  const Eigen::Matrix4cd herm = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void TwoAtomDensityMatrix::validate(double trace_tol, double hermitian_tol, double eigen_tol) const {
  std::ostringstream msg;
  if (const double h = hermiticity_error(); h > hermitian_tol) {
    msg << "density matrix is not Hermitian (max |rho - rho^dagger| = " << h << ")";
    throw InvalidStateError(msg.str());
  }
  if (const auto tr = trace(); std::abs(tr - 1.0) > trace_tol) {
    msg << "density matrix trace is " << tr.real() << " + " << tr.imag() << "i";
    throw InvalidStateError(msg.str());
  }
  if (const double ev = min_eigenvalue(); ev < -eigen_tol) {
    msg << "density matrix has negative eigenvalue " << ev;
    throw InvalidStateError(msg.str());
  }
}

TwoAtomDensityMatrix TwoAtomDensityMatrix::pure(const Eigen::Vector4cd& psi) {
  return {psi * psi.adjoint()};
}

ReducedState reduce(const TwoAtomDensityMatrix& rho, double trace_tol) {
  if (const auto tr = rho.trace(); std::abs(tr - 1.0) > trace_tol) {
    std::ostringstream msg;
    msg << "cannot reduce a density matrix with trace " << tr.real();
    throw InvalidStateError(msg.str());
  }
  const double p_aa = rho.population(kAA);
  const double p_ab = rho.population(kAB);
  const double p_ba = rho.population(kBA);
  const double p_bb = rho.population(kBB);
  return {p_aa + 0.5 * (p_ab + p_ba), p_ab - p_ba, p_aa - p_ab - p_ba + p_bb, rho.correlation().real()};
}

std::array<double, 4> populations(const ReducedState& s) {
  const double single = 0.5 * (1.0 - s.n);  // p_ab + p_ba
  const double quarter = 0.25 * (1.0 - s.n);
  return {s.a - quarter, 0.5 * (single + s.d), 0.5 * (single - s.d), 1.0 - s.a - quarter};
}

TwoAtomDensityMatrix reconstruct(const ReducedState& s, double pop_tol) {
  const auto pops = populations(s);
  for (int i = 0; i < 4; ++i) {
    if (!(pops[i] >= -pop_tol && pops[i] <= 1.0 + pop_tol)) {
      std::ostringstream msg;
      msg << "reduced state (a=" << s.a << ", d=" << s.d << ", n=" << s.n << ", x=" << s.x
          << ") gives population " << pops[i] << " for basis state " << i;
      throw UnphysicalStateError(msg.str());
    }
  }
  TwoAtomDensityMatrix rho;
  for (int i = 0; i < 4; ++i) rho.matrix(i, i) = pops[i];
  rho.matrix(kAB, kBA) = s.x;
  rho.matrix(kBA, kAB) = s.x;
  return rho;
}

DickePopulations super_sub_populations(const ReducedState& s) {
  const double base = 0.25 * (1.0 - s.n);
  return {base + s.x, base - s.x};
}

double entanglement_witness(const TwoAtomDensityMatrix& rho) {
  const double p_aa = std::max(0.0, rho.population(kAA));
  const double p_bb = std::max(0.0, rho.population(kBB));
  return std::abs(rho.correlation()) - std::sqrt(p_aa * p_bb);
}

double entanglement_witness(const ReducedState& s) {
  const auto pops = populations(s);
  return std::abs(s.x) - std::sqrt(std::max(0.0, pops[kAA]) * std::max(0.0, pops[kBB]));
}

}  // namespace superrad
