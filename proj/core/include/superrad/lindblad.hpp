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

// Full two-atom master equation on 4x4 density matrices. Serves as an
// independent check of the reduced equations: it evolves all 16 matrix
// elements, while the reduced model only tracks (a, d, n, x).
//
// With sigma_j = |b><a| on atom j the generator is
//
//   rho' = i sum_j h_j [[sigma_j, sigma_j^+], rho]
//        + sum_ij K_ij     (sigma_j^+ rho sigma_i - {sigma_i sigma_j^+, rho}/2)   (pump)
//        + sum_ij (K+g)_ij (sigma_i rho sigma_j^+ - {sigma_j^+ sigma_i, rho}/2)   (decay)
//
// h_1,2 = delta/2 +/- delta12/4, K_11,22 = gamma_plus +/- gamma_minus,
// K_21 = gammabar_plus + gammabar_minus, K_12 = gammabar_plus - gammabar_minus,
// g_ii = gamma_vac and g_12 = g_21 = gamma_cross.
//
// Vectorisation is row-major: vec(rho)[4 i + j] = rho(i, j), hence
// vec(A rho B) = (A kron B^T) vec(rho).

#pragma once

#include "superrad/dynamics.hpp"
#include "superrad/types.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace superrad {

using SuperVector = Eigen::Matrix<std::complex<double>, 16, 1>;
using SuperMatrix = Eigen::Matrix<std::complex<double>, 16, 16>;

struct Liouvillian {
  SuperMatrix matrix = SuperMatrix::Zero();

  SuperVector apply(const SuperVector& v) const { return matrix * v; }
  TwoAtomDensityMatrix apply(const TwoAtomDensityMatrix& rho) const;
};

SuperVector vectorize(const TwoAtomDensityMatrix& rho);
TwoAtomDensityMatrix unvectorize(const SuperVector& v);

struct OracleOptions {
  /// Vacuum cross decay gamma_12; 0 reproduces the small-sample equations.
  double gamma_cross = 0.0;
  /// Smallest eigenvalue tolerated before OracleIntegrityError.
  double positivity_tol = 1e-6;
};

Liouvillian build_liouvillian(const RateSet& rates, double gamma_cross = 0.0);

/// Right-hand side of the master equation evaluated directly with 4x4 matrix
/// products, without building the superoperator.
TwoAtomDensityMatrix master_equation_rhs(const TwoAtomDensityMatrix& rho, const RateSet& rates,
                                         double gamma_cross = 0.0);

struct OracleTrajectory {
  std::vector<double> t;
  std::vector<TwoAtomDensityMatrix> rho;
};

/// Integrates the master equation from rho0. Rates are recomputed from
/// reduce(rho) at every derivative evaluation with the same self-consistent
/// closure as integrate(); rho is re-symmetrised after each step. Samples land
/// on k * config.sample_dt and t_end (no peak refinement).
OracleTrajectory propagate(const TwoAtomDensityMatrix& rho0, const Parameters& params,
                           const IntegratorConfig& config, const OracleOptions& options = {});

struct SpectralReport {
  std::vector<std::complex<double>> eigenvalues;  ///< sorted by decreasing real part
  double abscissa = 0.0;                          ///< max real part
  int kernel_dimension = 0;                       ///< eigenvalues with |lambda| <= 1e-10
  /// Unit-trace stationary state when the kernel is one-dimensional.
  std::optional<TwoAtomDensityMatrix> stationary;
};

SpectralReport spectral_check(const Liouvillian& L);

}  // namespace superrad
