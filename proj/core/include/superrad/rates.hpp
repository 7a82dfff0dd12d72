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

// Closed-form collective rates Gamma (single atom, induced by the medium) and
// Gammabar (cross-atom), and their self-consistent solution.
//
// With Gamma_f = gamma/2 + Gamma the dressed linewidth, the rate equations are
//
//   zeta0     = C rho (gamma / Gamma_f) (2a - 1) / 2
//   zeta(D)   = zeta0 Gamma_f^2 / (Gamma_f^2 + D^2)
//   rho~(D)   = rho - (D / Gamma_f) zeta(D)
//   L(D)      = gamma Gamma_f / (Gamma_f^2 + D^2)
//   Gamma     = gamma a/(2a-1) (exp(2 zeta) - 1) + 2 gamma C^2 rho^4 L x I(zeta, rho~)
//   Gammabar  = 3 gamma C rho L a I(zeta, rho~) + 2 gamma C^2 rho^4 L x I(zeta, rho~)
//
// The right-hand side depends on Gamma itself through Gamma_f, so Gamma is the
// root of g(Gamma) = rhs(Gamma) - Gamma.

#pragma once

#include "superrad/types.hpp"

#include <complex>
#include <optional>

namespace superrad {

/// I(zeta, rho) = [((zeta-1)e^zeta + cos rho)^2 + (rho e^zeta - sin rho)^2] / (zeta^2 + rho^2)^2.
/// Evaluated without cancellation near the origin, where it tends to 1/4.
double geometric_factor(double zeta, double rho);

/// (e^z - 1)/z with the removable singularity at z = 0 filled in.
double expm1_ratio(double z);

struct RateInputs {
  double a = 1.0;
  double x = 0.0;
  double delta_probe = 0.0;  ///< detuning at which the rates are evaluated
  Parameters params;
};

struct RateIntermediates {
  double gamma_f = 0.5;    ///< gamma/2 + Gamma
  double zeta0 = 0.0;
  double zeta = 0.0;       ///< zeta(delta_probe)
  double rho_tilde = 0.0;  ///< rho~(delta_probe)
  double geom = 0.0;       ///< I(zeta, rho~)
};

struct RateEvaluation {
  double gamma_next = 0.0;
  double gammabar = 0.0;
  RateIntermediates intermediates;
};

/// One evaluation of the rate equations at a trial Gamma.
/// Throws SaturationError if exp(2 zeta) overflows and DomainError for
/// gamma_current < 0 or a outside [0, 1].
RateEvaluation rate_rhs(const RateInputs& inputs, double gamma_current);

struct RateSolution {
  double gamma = 0.0;
  double gammabar = 0.0;
  int iterations = 0;  ///< rhs evaluations spent after bracketing/warm check
};

/// Self-consistent Gamma* >= 0 with |rhs(Gamma*) - Gamma*| <= tol * max(Gamma*, gamma).
///
/// Cold solves scan g on a logarithmic grid over [0, min(rhs(0), 1e12 gamma)],
/// extended geometrically while g stays positive (rhs can grow with Gamma), and
/// throw AmbiguousRootError on more than one sign change and NoRootError on
/// none, then refine the bracket. A warm start skips the scan: the root is
/// bracketed by expanding geometrically around the previous value.
RateSolution solve_self_consistent(double a, double x, double delta, const Parameters& params,
                                   std::optional<double> warm_start = std::nullopt);

/// Fourier-space source functions with the prefactor wp^2 N / hbar^2 set to 1.
struct SourceFunctions {
  double p1s = 0.0;            ///< single-atom spontaneous source
  double p2s_per_x = 0.0;      ///< two-atom source, 2x-weighted Lorentzian
  std::complex<double> p1ret;  ///< single-atom retarded polarisation
};

SourceFunctions source_functions(double a, double x, double gamma_rate, double delta_probe, double delta,
                                 double gamma_vac = 1.0);

/// Retarded field kernel D(r) = -i scale exp(i q0 r) / r with
/// q0 = 1 + i (C gamma / 2) p1ret; r is measured in units of c/omega.
/// Im q0 > 0 (a < 1/2) attenuates, Im q0 < 0 (inversion) amplifies.
std::complex<double> retarded_kernel(double r, std::complex<double> p1ret, double scale,
                                     const Parameters& params);

/// Wave vector q0 in units of omega/c.
std::complex<double> kernel_wave_vector(std::complex<double> p1ret, const Parameters& params);

/// C = N lambda^3 / (4 pi^2), identical to 2 pi c^3 N / omega^3.
double cooperativity_from_density(double number_density, double wavelength);

}  // namespace superrad
