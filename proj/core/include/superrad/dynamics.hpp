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

// Reduced equations of motion for (a, d, n, x) with self-consistent rates,
// and the trajectory observables built on them.

#pragma once

#include "superrad/types.hpp"

#include <complex>
#include <cstddef>
#include <optional>

namespace superrad {

/// Grid used to sample Gamma(Delta') when the chirp is tracked.
struct ChirpGridSpec {
  double half_width = 1e4;  ///< units of gamma
  std::size_t points = 801;
  double core_width = 1.0;  ///< grid spacing scale near Delta' = 0
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Largest allowed step; 0 picks 1 / (50 max(C, 1) gamma).
  double max_step = 0.0;
  double t_end = 20.0;
  /// Output cadence; samples land on k * sample_dt plus t_end.
  double sample_dt = 1e-3;
  /// Extra dense-output samples per internal step near the intensity maximum.
  int peak_refine = 16;
  ReducedState initial{1.0, 0.0, 1.0, 0.0};
  /// Multiplies Gamma and Gammabar after each solve; 1 except in sensitivity studies.
  double rate_scale = 1.0;
  ChirpGridSpec chirp_grid;

  void validate() const;
  double effective_max_step(const Parameters& params) const;
};

/// (a, d, n, x) with x = rho_{ab,ba} allowed to be complex.
struct GeneralState {
  double a = 0.0;
  double d = 0.0;
  double n = 0.0;
  std::complex<double> x;
};

/// Small-sample equations (Gamma_- = Gammabar_- = Delta_12 = 0):
///   a' = -(2G + g) a + G
///   n' = -2(2G + g) n - 2g(2a - 1) + 8 Gb x
///   x' = -(2G + g) x + Gb n,   d' = 0
ReducedState rhs_small_sample(const ReducedState& s, const RateSet& rates);

/// Equations for two distinguishable atoms. n' takes the real part of the
/// x-dependent sum, which is what the density matrix itself produces.
GeneralState rhs_general(const GeneralState& s, const RateSet& rates);

/// Emission per atom, -da/dt.
double intensity(const ReducedState& s, const RateSet& rates);

/// Integrates from config.initial over [0, t_end]. Every derivative
/// evaluation re-solves the rates, warm-started from the previous solve.
/// Stops early once a < 1e-12. Rate-solver failures surface as SolverFailure
/// naming the time and state; step-size collapse as StiffnessError.
Trajectory integrate(const IntegratorConfig& config, const Parameters& params);

/// Rates of the reduced model at a state, as integrate() computes them.
RateSet rates_at(const ReducedState& s, const Parameters& params, double delta = 0.0,
                 std::optional<double> warm_start = std::nullopt, double rate_scale = 1.0);

/// Chirp for the current state: Kramers-Kronig transform of Gamma(Delta')
/// evaluated at previous_delta.
double chirp_for_state(const ReducedState& s, const Parameters& params, const ChirpGridSpec& grid,
                       double previous_delta);

struct Peak {
  double t_max = 0.0;
  double intensity = 0.0;
  std::size_t index = 0;   ///< sample holding the largest intensity
  bool at_boundary = false;  ///< maximum on the first or last sample; t_end may be too short
};

/// Global intensity maximum refined by a parabola through the neighbouring
/// samples. Needs at least three samples.
Peak find_peak(const Trajectory& traj);

}  // namespace superrad
