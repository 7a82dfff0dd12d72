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

#pragma once

#include "superrad/types.hpp"

#include <vector>

namespace superrad {

/// Gamma sampled against probe detuning Delta'.
struct SpectralProfile {
  std::vector<double> detuning;  ///< strictly increasing, symmetric about 0
  std::vector<double> gamma;

  /// Throws DomainError unless the grid is strictly increasing and symmetric.
  void validate() const;
};

/// Symmetric grid on [-half_width, half_width] with `points` nodes (odd counts
/// include 0). Spacing is sinh-stretched so that it is ~core_width near the
/// centre and grows towards the tails.
std::vector<double> symmetric_grid(double half_width, std::size_t points, double core_width);

/// Self-consistent Gamma(Delta') over the grid. Points are solved outward from
/// the centre with warm starts, so the result is independent of threading.
/// Solver errors are rethrown as DomainError naming the offending Delta'.
SpectralProfile gamma_spectrum(double a, double x, const Parameters& params, const std::vector<double>& grid);

struct ChirpResult {
  double chirp = 0.0;       ///< (1/pi) P int Gamma(D') / (D - D') dD'
  double tail_bound = 0.0;  ///< estimate of the truncated |D'| > half-width part
};

/// Principal-value Kramers-Kronig transform of the profile at delta_eval.
/// Uses singularity subtraction: the regular part
/// (Gamma(D') - Gamma(D)) / (D - D') is integrated with the trapezoid rule on
/// the grid, and the subtracted Gamma(D) P int dD'/(D - D') is added
/// analytically. Gamma(D) and Gamma'(D) come from a natural cubic spline.
ChirpResult chirp_kk_detailed(const SpectralProfile& profile, double delta_eval);

double chirp_kk(const SpectralProfile& profile, double delta_eval);

}  // namespace superrad
