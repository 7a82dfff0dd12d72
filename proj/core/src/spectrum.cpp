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

#include "superrad/spectrum.hpp"

#include "superrad/errors.hpp"
#include "superrad/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace superrad {
namespace {

// Natural cubic spline through (x_i, y_i); second derivatives via the Thomas
// algorithm.
class NaturalSpline {
 public:
  NaturalSpline(const std::vector<double>& x, const std::vector<double>& y) : x_(x), y_(y), m_(x.size(), 0.0) {
    const std::size_t n = x.size();
    if (n < 3) return;
    std::vector<double> diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x[i] - x[i - 1];
      const double h1 = x[i + 1] - x[i];
      const double lower = h0 / 6.0;
      diag[i] = (h0 + h1) / 3.0;
      upper[i] = h1 / 6.0;
      rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
      // forward elimination against row i-1
      const double w = lower / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
    }
  }

  // value and first derivative at t
  std::pair<double, double> eval(double t) const {
    const std::size_t n = x_.size();
    std::size_t k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin());
    k = std::clamp<std::size_t>(k, 1, n - 1);
    const double h = x_[k] - x_[k - 1];
    const double A = (x_[k] - t) / h;
    const double B = (t - x_[k - 1]) / h;
    const double value = A * y_[k - 1] + B * y_[k] + ((A * A * A - A) * m_[k - 1] + (B * B * B - B) * m_[k]) * h * h / 6.0;
    const double slope = (y_[k] - y_[k - 1]) / h - (3.0 * A * A - 1.0) / 6.0 * h * m_[k - 1] +
                         (3.0 * B * B - 1.0) / 6.0 * h * m_[k];
    return {value, slope};
  }

 private:
  const std::vector<double>& x_;
  const std::vector<double>& y_;
  std::vector<double> m_;
};

}  // namespace

void SpectralProfile::validate() const {
  const std::size_t n = detuning.size();
  if (n < 2) throw DomainError("spectral profile needs at least two grid points");
  if (gamma.size() != n) throw DomainError("spectral profile: grid and sample counts differ");
  const double scale = std::max(std::abs(detuning.front()), std::abs(detuning.back()));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(detuning[i]) || !std::isfinite(gamma[i])) throw DomainError("spectral profile: non-finite entry");
    if (i > 0 && !(detuning[i] > detuning[i - 1])) throw DomainError("spectral profile: grid not strictly increasing");
    if (std::abs(detuning[i] + detuning[n - 1 - i]) > 1e-12 * scale) {
      throw DomainError("spectral profile: grid not symmetric about 0");
    }
  }
}

std::vector<double> symmetric_grid(double half_width, std::size_t points, double core_width) {
  if (points < 2) throw DomainError("symmetric_grid: need at least two points");
  if (!(half_width > 0.0) || !(core_width > 0.0)) throw DomainError("symmetric_grid: widths must be > 0");
  const double umax = std::asinh(half_width / core_width);
  const std::size_t half = points / 2;
  std::vector<double> grid(points, 0.0);
  // points is odd: nodes u_k = k du, k = 0..half; even: u_k = (k + 1/2) du
  const bool odd = points % 2 == 1;
  const double du = odd ? umax / static_cast<double>(half) : umax / (static_cast<double>(half) - 0.5);
  for (std::size_t k = 0; k < half; ++k) {
    const double u = odd ? static_cast<double>(k + 1) * du : (static_cast<double>(k) + 0.5) * du;
    const double v = (k + 1 == half) ? half_width : core_width * std::sinh(u);
    grid[points - half + k] = v;
    grid[half - 1 - k] = -v;
  }
  return grid;
}

SpectralProfile gamma_spectrum(double a, double x, const Parameters& params, const std::vector<double>& grid) {
  SpectralProfile profile{grid, std::vector<double>(grid.size(), 0.0)};
  if (grid.empty()) throw DomainError("gamma_spectrum: empty grid");
  for (double d : grid) {
    if (!std::isfinite(d)) throw DomainError("gamma_spectrum: non-finite grid point");
  }

  auto solve_at = [&](std::size_t i, std::optional<double> warm) {
    try {
      profile.gamma[i] = solve_self_consistent(a, x, grid[i], params, warm).gamma;
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "gamma_spectrum failed at detuning " << grid[i] << ": " << e.what();
      throw DomainError(msg.str());
    }
  };

  const auto centre_it = std::min_element(grid.begin(), grid.end(),
                                          [](double l, double r) { return std::abs(l) < std::abs(r); });
  const std::size_t centre = static_cast<std::size_t>(centre_it - grid.begin());
  solve_at(centre, std::nullopt);
  for (std::size_t i = centre + 1; i < grid.size(); ++i) solve_at(i, profile.gamma[i - 1]);
  for (std::size_t i = centre; i-- > 0;) solve_at(i, profile.gamma[i + 1]);
  return profile;
}

ChirpResult chirp_kk_detailed(const SpectralProfile& profile, double delta_eval) {
  profile.validate();
  const auto& xs = profile.detuning;
  const auto& ys = profile.gamma;
  const double lo = xs.front();
  const double hi = xs.back();
  if (!(delta_eval > lo && delta_eval < hi)) {
    std::ostringstream msg;
    msg << "chirp_kk: detuning " << delta_eval << " outside the open grid interval (" << lo << ", " << hi << ")";
    throw DomainError(msg.str());
  }

  const NaturalSpline spline(xs, ys);
  const auto [g_eval, slope_eval] = spline.eval(delta_eval);

  const std::size_t n = xs.size();
  auto integrand = [&](std::size_t k) {
    const double diff = delta_eval - xs[k];
    const double h = k + 1 < n ? xs[k + 1] - xs[k] : xs[k] - xs[k - 1];
    if (std::abs(diff) < 1e-9 * h) return -slope_eval;
    return (ys[k] - g_eval) / diff;
  };

  double regular = 0.0;
  double f_prev = integrand(0);
  for (std::size_t k = 1; k < n; ++k) {
    const double f = integrand(k);
    regular += 0.5 * (f + f_prev) * (xs[k] - xs[k - 1]);
    f_prev = f;
  }
  // P int_lo^hi dD' / (D - D') = ln((D - lo) / (hi - D))
  const double singular = g_eval * std::log((delta_eval - lo) / (hi - delta_eval));

  ChirpResult out;
  out.chirp = (regular + singular) / std::numbers::pi;
  // Beyond the grid assume Gamma decays at least like 1/D'^2.
  const double right = std::abs(ys.back()) * hi / (hi - delta_eval);
  const double left = std::abs(ys.front()) * (-lo) / (delta_eval - lo);
  out.tail_bound = (right + left) / std::numbers::pi;
  return out;
}

double chirp_kk(const SpectralProfile& profile, double delta_eval) {
  return chirp_kk_detailed(profile, delta_eval).chirp;
}

}  // namespace superrad
