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

#include "superrad/scan.hpp"

#include "superrad/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace superrad {
namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("fit_scaling: all cooperativities are equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace

ScanRow summarize(const Trajectory& traj, double coop, double rho_size) {
  ScanRow row;
  row.coop = coop;
  row.rho_size = rho_size;
  const Peak peak = find_peak(traj);
  row.tau_max = peak.t_max;
  row.peak_intensity = peak.intensity;
  row.boundary_peak = peak.at_boundary;
  for (const Sample& s : traj.samples) {
    row.max_gamma = std::max(row.max_gamma, s.rates.gamma_plus);
    row.max_x = std::max(row.max_x, s.state.x);
    row.max_rho_mm = std::max(row.max_rho_mm, s.rho_mm);
  }
  return row;
}

double scan_t_end(double coop, double gamma) { return 50.0 / (std::max(coop, 1.0) * gamma) + 5.0 / gamma; }

std::vector<ScanRow> sweep(const std::vector<double>& c_values, double rho_size, const Parameters& params,
                           const IntegratorConfig& config, unsigned threads) {
  if (c_values.empty()) throw DomainError("sweep: no cooperativity values");
  for (double c : c_values) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("sweep: cooperativities must be finite and >= 0");
  }
  std::vector<ScanRow> rows(c_values.size());
  auto run_row = [&](std::size_t i) {
    Parameters p = params;
    p.coop = c_values[i];
    p.rho_size = rho_size;
    IntegratorConfig cfg = config;
    cfg.t_end = scan_t_end(p.coop, p.gamma);
    try {
      rows[i] = summarize(integrate(cfg, p), p.coop, rho_size);
    } catch (const std::exception& e) {
      rows[i] = ScanRow{};
      rows[i].coop = p.coop;
      rows[i].rho_size = rho_size;
      rows[i].error = e.what();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(c_values.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < c_values.size(); i = next++) run_row(i);
  };
  std::vector<std::jthread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();

  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return c_values[l] < c_values[r]; });
  std::vector<ScanRow> sorted;
  sorted.reserve(rows.size());
  for (std::size_t i : order) sorted.push_back(std::move(rows[i]));
  return sorted;
}

ScalingFit fit_scaling(const std::vector<ScanRow>& rows) {
  std::vector<double> c, peak, log_c, log_tau;
  for (const ScanRow& r : rows) {
    if (!r.ok()) continue;
    c.push_back(r.coop);
    peak.push_back(r.peak_intensity);
    if (r.coop > 0.0 && r.tau_max > 0.0) {
      log_c.push_back(std::log(r.coop));
      log_tau.push_back(std::log(r.tau_max));
    }
  }
  if (c.size() < 3) throw FitError("fit_scaling: need at least three successful rows");
  ScalingFit out;
  const LineFit lin = least_squares(c, peak);
  out.slope = lin.slope;
  out.intercept = lin.intercept;
  out.r_squared = lin.r_squared;
  if (log_c.size() < 2) throw FitError("fit_scaling: need two rows with C > 0 and tau_max > 0 for the power law");
  const LineFit pw = least_squares(log_c, log_tau);
  out.tau_exponent = pw.slope;
  out.tau_prefactor = std::exp(pw.intercept);
  out.tau_r_squared = pw.r_squared;
  return out;
}

}  // namespace superrad
