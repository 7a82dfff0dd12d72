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

// Command-line front end. Kept as a library so tests can drive it in-process.

#pragma once

#include "superrad/dynamics.hpp"
#include "superrad/types.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace superrad::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverFailure = 3, kOracleMismatch = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Parameters params;
  IntegratorConfig integrator;
  std::string output_dir = ".";

  // scan
  std::vector<double> c_values{10.0, 20.0, 30.0};
  unsigned threads = 0;

  // spectrum
  double grid_half_width = 1e4;
  long grid_points = 801;
  double grid_core_width = 1.0;

  // oracle-check
  double rate_perturbation = 0.0;
  double gamma_cross = 0.0;
  double oracle_threshold = 1e-6;

  /// Throws ConfigError with a readable message.
  void validate() const;
};

/// Names accepted both as flat JSON keys and as --key=value flags.
std::vector<std::string> config_keys();

/// Applies one key. `value` is the JSON text of the value (a flag string is
/// first interpreted as a JSON scalar, else as a bare string; lists may be
/// given comma separated). Throws ConfigError on unknown keys or bad types.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses a flat JSON object into cfg; throws ConfigError.
void apply_json(RunConfig& cfg, const std::string& json_text);

/// Formats with 17 significant digits, locale independent.
std::string format_number(double v);

/// CSV text for a trajectory with '#' unit comments; \p comment (full
/// '#'-prefixed lines) goes right before the column header.
std::string trajectory_csv(const Trajectory& traj, const std::string& comment = "");

/// Entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace superrad::cli
