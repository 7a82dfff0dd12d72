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

#include "superrad/dynamics.hpp"

#include "superrad/errors.hpp"
#include "superrad/ode.hpp"
#include "superrad/rates.hpp"
#include "superrad/spectrum.hpp"
#include "superrad/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace superrad {
namespace {

constexpr double kEmptyPopulation = 1e-12;
constexpr double kPeakWindow = 0.05;  // refine steps within 5% of the running maximum

std::string format_state(double t, const ReducedState& s) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "t = " << t << ", state (a=" << s.a << ", d=" << s.d << ", n=" << s.n << ", x=" << s.x << ")";
  return msg.str();
}

std::string last_sample(const Trajectory& traj, const IntegratorConfig& config) {
  if (traj.empty()) return format_state(0.0, config.initial);
  return format_state(traj.back().t, traj.back().state);
}

}  // namespace

void IntegratorConfig::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("invalid integrator config: " + msg); };
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) fail("tolerances must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("t_end must be > 0");
  if (!(max_step >= 0.0)) fail("max_step must be >= 0");
  if (!(sample_dt > 0.0)) fail("sample_dt must be > 0");
  if (peak_refine < 0) fail("peak_refine must be >= 0");
  if (!(rate_scale >= 0.0)) fail("rate_scale must be >= 0");
  if (chirp_grid.points < 3 || !(chirp_grid.half_width > 0.0) || !(chirp_grid.core_width > 0.0)) {
    fail("chirp grid needs >= 3 points and positive widths");
  }
}

double IntegratorConfig::effective_max_step(const Parameters& params) const {
  if (max_step > 0.0) return max_step;
  return 1.0 / (50.0 * std::max(params.coop, 1.0) * params.gamma);
}

ReducedState rhs_small_sample(const ReducedState& s, const RateSet& rates) {
  const double gam = rates.gamma_plus;
  const double bar = rates.gammabar_plus;
  const double g = rates.gamma_vac;
  const double loss = 2.0 * gam + g;
  ReducedState out;
  out.a = -loss * s.a + gam;
  out.d = 0.0;
  out.n = -2.0 * loss * s.n - 2.0 * g * (2.0 * s.a - 1.0) + 8.0 * bar * s.x;
  out.x = -loss * s.x + bar * s.n;
  return out;
}

GeneralState rhs_general(const GeneralState& s, const RateSet& r) {
  using namespace std::complex_literals;
  const double loss = 2.0 * r.gamma_plus + r.gamma_vac;
  const double cross_sum = r.gammabar_plus + r.gammabar_minus;
  const double cross_diff = r.gammabar_plus - r.gammabar_minus;
  GeneralState out;
  out.a = -loss * s.a + r.gamma_plus - r.gamma_minus * s.d;
  out.d = -loss * s.d - 2.0 * r.gamma_minus * (2.0 * s.a - 1.0);
  out.n = -2.0 * loss * s.n - 2.0 * r.gamma_vac * (2.0 * s.a - 1.0) +
          (4.0 * cross_sum * s.x + 4.0 * cross_diff * std::conj(s.x)).real();
  out.x = -(r.gamma_vac + 2.0 * r.gamma_plus + 1i * r.delta12) * s.x + cross_sum * s.n;
  return out;
}

double intensity(const ReducedState& s, const RateSet& rates) {
  return -rhs_general({s.a, s.d, s.n, s.x}, rates).a;
}

RateSet rates_at(const ReducedState& s, const Parameters& params, double delta, std::optional<double> warm_start,
                 double rate_scale) {
  const RateSolution sol = solve_self_consistent(s.a, s.x, delta, params, warm_start);
  return RateSet::symmetric(rate_scale * sol.gamma, rate_scale * sol.gammabar, params.gamma, delta);
}

double chirp_for_state(const ReducedState& s, const Parameters& params, const ChirpGridSpec& grid,
                       double previous_delta) {
  const auto nodes = symmetric_grid(grid.half_width, grid.points, grid.core_width);
  const SpectralProfile profile = gamma_spectrum(s.a, s.x, params, nodes);
  return chirp_kk(profile, previous_delta);
}

Trajectory integrate(const IntegratorConfig& config, const Parameters& params) {
  params.validate();
  config.validate();
  reconstruct(config.initial);  // throws UnphysicalStateError for a bad initial state

  const bool track_chirp = params.delta_mode == DeltaMode::kramers_kronig;
  double delta = 0.0;
  if (track_chirp) delta = chirp_for_state(config.initial, params, config.chirp_grid, 0.0);

  // Warm-start chain: each solve seeds the next one.
  std::optional<double> warm;
  auto rates_for = [&](const ReducedState& s, std::optional<double>& seed) {
    const RateSolution sol = solve_self_consistent(s.a, s.x, delta, params, seed);
    seed = sol.gamma;
    return RateSet::symmetric(config.rate_scale * sol.gamma, config.rate_scale * sol.gammabar, params.gamma, delta);
  };
  auto rhs = [&](double, const Eigen::Vector4d& y) -> Eigen::Vector4d {
    const ReducedState s = ReducedState::from_vector(y);
    return rhs_small_sample(s, rates_for(s, warm)).as_vector();
  };

  Trajectory traj;
  auto emit = [&](double t, const Eigen::Vector4d& y) {
    Sample sample;
    sample.t = t;
    sample.state = ReducedState::from_vector(y);
    std::optional<double> seed = warm;  // sampling must not perturb the integration chain
    sample.rates = rates_for(sample.state, seed);
    sample.intensity = intensity(sample.state, sample.rates);
    const DickePopulations dicke = super_sub_populations(sample.state);
    sample.rho_pp = dicke.plus;
    sample.rho_mm = dicke.minus;
    sample.witness = entanglement_witness(sample.state);
    traj.samples.push_back(sample);
  };

  StepControl control;
  control.rel_tol = config.rel_tol;
  control.abs_tol = config.abs_tol;
  control.max_step = config.effective_max_step(params);

  const double t_end = config.t_end;
  const double dt = config.sample_dt;
  try {
    auto stepper = make_dormand_prince<Eigen::Vector4d>(rhs, 0.0, config.initial.as_vector(), control);
    emit(0.0, stepper.y());
    long next_cadence = 1;
    double running_max = -stepper.derivative()[0];
    std::vector<double> times;

    while (stepper.t() < t_end) {
      stepper.step(t_end);
      const double t0 = stepper.t_prev();
      const double t1 = stepper.t();

      times.clear();
      for (;; ++next_cadence) {
        const double tc = static_cast<double>(next_cadence) * dt;
        if (tc > t1 || tc >= t_end) break;
        times.push_back(tc);
      }
      const double i0 = -stepper.derivative_prev()[0];
      const double i1 = -stepper.derivative()[0];
      running_max = std::max(running_max, i1);
      const bool near_peak = std::max(i0, i1) >= (1.0 - kPeakWindow) * running_max;
      if (near_peak && config.peak_refine > 0) {
        for (int j = 1; j <= config.peak_refine; ++j) times.push_back(t0 + (t1 - t0) * j / (config.peak_refine + 1));
        times.push_back(t1);
      }
      const bool finished = t1 >= t_end || stepper.y()[0] < kEmptyPopulation;
      if (finished) times.push_back(t1);

      std::sort(times.begin(), times.end());
      for (double t : times) {
        if (t <= traj.back().t) continue;
        emit(t, stepper.dense(t));
      }
      if (finished) break;

      if (track_chirp && !times.empty()) {
        delta = chirp_for_state(traj.back().state, params, config.chirp_grid, delta);
        stepper.restart(stepper.y());
      }
    }
  } catch (const StiffnessError& e) {
    throw StiffnessError(std::string(e.what()) + "; last sample " + last_sample(traj, config), e.time());
  } catch (const SolverFailure& e) {
    throw SolverFailure(std::string(e.what()) + "; last sample " + last_sample(traj, config), e.time());
  } catch (const Error& e) {
    const double t = traj.empty() ? 0.0 : traj.back().t;
    throw SolverFailure(std::string("rate solve failed: ") + e.what() + "; last sample " + last_sample(traj, config), t);
  }
  return traj;
}

Peak find_peak(const Trajectory& traj) {
  if (traj.size() < 3) throw DomainError("find_peak needs at least three samples");
  const auto& s = traj.samples;
  std::size_t k = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].intensity > s[k].intensity) k = i;
  }
  Peak peak{s[k].t, s[k].intensity, k, false};
  if (k == 0 || k + 1 == s.size()) {
    peak.at_boundary = true;
    return peak;
  }
  // Parabola p(t) = I0 + A (t - t0) + B (t - t0)(t - t1) through three samples.
  const double t0 = s[k - 1].t, t1 = s[k].t, t2 = s[k + 1].t;
  const double i0 = s[k - 1].intensity, i1 = s[k].intensity, i2 = s[k + 1].intensity;
  const double A = (i1 - i0) / (t1 - t0);
  const double B = ((i2 - i1) / (t2 - t1) - A) / (t2 - t0);
  if (B < 0.0) {
    const double tv = std::clamp(0.5 * (t0 + t1) - A / (2.0 * B), t0, t2);
    peak.t_max = tv;
    peak.intensity = i0 + A * (tv - t0) + B * (tv - t0) * (tv - t1);
  }
  return peak;
}

}  // namespace superrad
