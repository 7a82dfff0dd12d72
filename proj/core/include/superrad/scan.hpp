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

// Sweeps over the cooperativity and power-law fits of the burst observables.

#pragma once

#include "superrad/dynamics.hpp"
#include "superrad/types.hpp"

#include <string>
#include <vector>

namespace superrad {

struct ScanRow {
  double coop = 0.0;
  double rho_size = 0.0;
  double tau_max = 0.0;         ///< time of maximum emission, 1/gamma
  double peak_intensity = 0.0;  ///< gamma
  double max_gamma = 0.0;       ///< largest Gamma along the trajectory, gamma
  double max_x = 0.0;
  double max_rho_mm = 0.0;
  bool boundary_peak = false;   ///< maximum on the first or last sample
  std::string error;            ///< non-empty when the row failed

  bool ok() const { return error.empty(); }
};

/// Row for a single trajectory that has already been integrated.
ScanRow summarize(const Trajectory& traj, double coop, double rho_size);

/// Integration window used by sweep(): 50 / (max(C, 1) gamma) + 5 / gamma.
double scan_t_end(double coop, double gamma);

/// One integrate() + find_peak() per C with identical settings (t_end is set
/// per row by scan_t_end). Rows run concurrently on up to threads workers
/// (0 picks the hardware concurrency) and come back in the order of
/// c_values. A failing row carries its message in ScanRow::error.
std::vector<ScanRow> sweep(const std::vector<double>& c_values, double rho_size, const Parameters& params,
                           const IntegratorConfig& config, unsigned threads = 0);

struct ScalingFit {
  double slope = 0.0;         ///< peak intensity per unit C
  double intercept = 0.0;
  double r_squared = 0.0;     ///< of the linear peak fit
  double tau_exponent = 0.0;  ///< d log tau_max / d log C
  double tau_prefactor = 0.0; ///< tau_max ~ prefactor * C^exponent
  double tau_r_squared = 0.0;
};

/// Least squares of peak vs C and of log tau_max vs log C over the rows that
/// succeeded. Needs three such rows with distinct positive C; FitError
/// otherwise.
ScalingFit fit_scaling(const std::vector<ScanRow>& rows);

}  // namespace superrad
