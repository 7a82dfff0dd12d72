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

#include "goldens.hpp"
#include "superrad/dynamics.hpp"
#include "superrad/errors.hpp"
#include "superrad/ode.hpp"
#include "superrad/rates.hpp"
#include "superrad/state.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace superrad {
namespace {

Parameters with_coop(double c) {
  Parameters p;
  p.coop = c;
  return p;
}

// One trajectory at the headline parameters shared by several tests.
const Trajectory& headline() {
  static const Trajectory traj = integrate(IntegratorConfig{}, Parameters{});
  return traj;
}

TEST(RhsSmallSample, Examples) {
  const RateSet vac = RateSet::symmetric(0.0, 0.0, 1.0);
  ReducedState d = rhs_small_sample({1.0, 0.0, 1.0, 0.0}, vac);
  EXPECT_EQ(d.a, -1.0);
  EXPECT_EQ(d.n, -4.0);
  EXPECT_EQ(d.x, 0.0);
  EXPECT_EQ(d.d, 0.0);
  d = rhs_small_sample({0.0, 0.0, 1.0, 0.0}, vac);
  EXPECT_EQ(d.a, 0.0);
  EXPECT_EQ(d.n, 0.0);
  EXPECT_EQ(d.x, 0.0);

  const RateSet star = RateSet::symmetric(golden::kGammaStarFull, golden::kGammabarStarFull, 1.0);
  EXPECT_NEAR(-rhs_small_sample({1.0, 0.0, 1.0, 0.0}, star).a, golden::kGammaStarFull + 1.0, 1e-12);
}

TEST(RhsGeneral, ReducesToSmallSample) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const ReducedState s{u(rng), 0.0, 2.0 * u(rng) - 1.0, 0.5 * u(rng) - 0.25};
    const RateSet r = RateSet::symmetric(50.0 * u(rng), 50.0 * u(rng), 1.0);
    const ReducedState small = rhs_small_sample(s, r);
    const GeneralState gen = rhs_general({s.a, s.d, s.n, s.x}, r);
    EXPECT_NEAR(gen.a, small.a, 1e-13);
    EXPECT_NEAR(gen.d, small.d, 1e-13);
    EXPECT_NEAR(gen.n, small.n, 1e-12);
    EXPECT_NEAR(gen.x.real(), small.x, 1e-13);
    EXPECT_EQ(gen.x.imag(), 0.0);
  }
}

TEST(RhsGeneral, DifferenceDecaysWithGamma) {
  const RateSet vac{0.0, 0.0, 0.0, 0.0, 1.3, 0.0, 0.0};
  const GeneralState g = rhs_general({0.6, 0.25, 0.1, 0.0}, vac);
  EXPECT_NEAR(g.d, -1.3 * 0.25, 1e-15);
}

TEST(RhsGeneral, RelativeShiftOnlyRotatesCorrelation) {
  RateSet r{};
  r.gamma_plus = 0.7;
  r.gamma_vac = 1.0;
  r.delta12 = 5.0;
  using Vec = Eigen::Matrix<std::complex<double>, 1, 1>;
  auto rhs = [&](double, const Vec& v) {
    Vec out;
    out[0] = rhs_general({0.5, 0.0, 0.0, v[0]}, r).x;
    return out;
  };
  Vec x0;
  x0[0] = {0.2, 0.1};
  StepControl control;
  control.rel_tol = 1e-12;
  control.abs_tol = 1e-14;
  auto stepper = make_dormand_prince<Vec>(rhs, 0.0, x0, control);
  while (stepper.t() < 2.0) stepper.step(2.0);
  const double expected = std::abs(x0[0]) * std::exp(-(1.0 + 2.0 * 0.7) * 2.0);
  EXPECT_NEAR(std::abs(stepper.y()[0]), expected, 1e-11);
  EXPECT_GT(std::abs(std::arg(stepper.y()[0]) - std::arg(x0[0])), 0.1);
}

TEST(Intensity, Examples) {
  EXPECT_EQ(intensity({0.0, 0.0, 1.0, 0.0}, RateSet::symmetric(0.0, 0.0, 1.0)), 0.0);
  EXPECT_EQ(intensity({1.0, 0.0, 1.0, 0.0}, RateSet::symmetric(0.0, 0.0, 1.0)), 1.0);
  EXPECT_NEAR(intensity({1.0, 0.0, 1.0, 0.0}, RateSet::symmetric(golden::kGammaStarFull, 0.0, 1.0)),
              golden::kGammaStarFull + 1.0, 1e-12);
}

TEST(Integrate, FreeDecayClosedForm) {
  IntegratorConfig cfg;
  cfg.t_end = 10.0;
  const Trajectory traj = integrate(cfg, with_coop(0.0));
  ASSERT_GT(traj.size(), 1000u);
  EXPECT_EQ(traj.back().t, 10.0);
  for (const Sample& s : traj.samples) {
    const double a = std::exp(-s.t);
    EXPECT_NEAR(s.state.a, a, 1e-8) << "t = " << s.t;
    EXPECT_NEAR(s.state.n, (2.0 * a - 1.0) * (2.0 * a - 1.0), 1e-8) << "t = " << s.t;
    EXPECT_EQ(s.state.x, 0.0);
    EXPECT_EQ(s.state.d, 0.0);
  }
}

TEST(Integrate, SamplesOnCadenceAndIncreasing) {
  const Trajectory& traj = headline();
  EXPECT_EQ(traj.front().t, 0.0);
  EXPECT_EQ(traj.back().t, 20.0);
  std::size_t on_cadence = 0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    ASSERT_GT(traj.samples[i].t, traj.samples[i - 1].t);
    const double k = std::round(traj.samples[i].t / 1e-3);
    if (traj.samples[i].t == k * 1e-3) ++on_cadence;
  }
  EXPECT_GE(on_cadence, 19999u);
}

TEST(Integrate, InitialRatesMatchGolden) {
  const Sample& s0 = headline().front();
  EXPECT_NEAR(s0.rates.gamma_plus, golden::kGammaStarFull, 1e-8 * golden::kGammaStarFull);
  EXPECT_NEAR(s0.rates.gammabar_plus, golden::kGammabarStarFull, 1e-8 * golden::kGammabarStarFull);
  EXPECT_NEAR(s0.intensity, golden::kGammaStarFull + 1.0, 1e-7);
}

TEST(Integrate, CorrelationBurstAndMonotonePopulation) {
  const Trajectory& traj = headline();
  double max_x = 0.0, t_max_x = 0.0, max_gamma = 0.0, max_gammabar = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Sample& s = traj.samples[i];
    if (s.state.x > max_x) {
      max_x = s.state.x;
      t_max_x = s.t;
    }
    max_gamma = std::max(max_gamma, s.rates.gamma_plus);
    max_gammabar = std::max(max_gammabar, s.rates.gammabar_plus);
    if (i > 0) EXPECT_LE(s.state.a, traj.samples[i - 1].state.a + 1e-14) << "t = " << s.t;
  }
  EXPECT_EQ(traj.front().state.x, 0.0);
  EXPECT_GT(max_x, 0.1);
  EXPECT_LT(t_max_x, 0.05);
  EXPECT_LT(traj.back().state.x, 0.01 * max_x);
  EXPECT_GE(max_gamma, 25.0);
  EXPECT_GE(max_gammabar, 25.0);
}

TEST(Integrate, PhysicalAlongTrajectory) {
  for (const Sample& s : headline().samples) {
    ASSERT_GE(s.state.a, 0.0);
    ASSERT_LE(s.state.a, 1.0);
    const TwoAtomDensityMatrix rho = reconstruct(s.state);
    ASSERT_NEAR(rho.trace().real(), 1.0, 1e-12);
    ASSERT_GE(rho.min_eigenvalue(), -1e-8) << "t = " << s.t;
    ASSERT_LE(s.witness, 1e-8) << "t = " << s.t;
    ASSERT_GE(s.rho_mm, -1e-10);
    ASSERT_GE(s.rho_pp, s.rho_mm);
  }
}

TEST(Integrate, LongTimeBehaviour) {
  // The correlation dies out and the Dicke populations equalise. The
  // population itself settles where the self-consistent pump balances decay,
  // a = Gamma / (2 Gamma + gamma), rather than at zero.
  const Trajectory& traj = headline();
  const Sample& end = traj.back();
  double max_pp = 0.0;
  for (const Sample& s : traj.samples) max_pp = std::max(max_pp, s.rho_pp);
  EXPECT_LT(std::abs(end.state.x), 1e-3);
  EXPECT_LT(std::abs(end.rho_pp - end.rho_mm), 0.05 * max_pp);
  EXPECT_LT(end.state.a, 0.5);
  const double balance = end.rates.gamma_plus / (2.0 * end.rates.gamma_plus + 1.0);
  EXPECT_NEAR(end.state.a, balance, 1e-3);
  EXPECT_LT(std::abs(end.intensity), 1e-3);
}

TEST(Integrate, EnergyBookkeeping) {
  IntegratorConfig cfg;
  cfg.t_end = 0.02;
  cfg.sample_dt = 1e-5;
  cfg.peak_refine = 0;
  const Trajectory traj = integrate(cfg, Parameters{});
  ASSERT_EQ(traj.size(), 2001u);
  const double h = cfg.sample_dt;
  double simpson = 0.0;
  for (std::size_t i = 0; i + 2 < traj.size(); i += 2) {
    simpson += h / 3.0 *
               (traj.samples[i].intensity + 4.0 * traj.samples[i + 1].intensity + traj.samples[i + 2].intensity);
  }
  EXPECT_NEAR(traj.front().state.a - traj.back().state.a, simpson, 1e-6);
}

TEST(Integrate, TighterToleranceMovesPeakLittle) {
  const Peak base = find_peak(headline());
  IntegratorConfig cfg;
  cfg.rel_tol *= 0.5;
  cfg.abs_tol *= 0.5;
  cfg.t_end = 0.01;
  const Peak tight = find_peak(integrate(cfg, Parameters{}));
  EXPECT_LT(std::abs(tight.intensity - base.intensity), 1e-3 * base.intensity);
  EXPECT_LT(std::abs(tight.t_max - base.t_max), 1e-3 * base.t_max);
}

TEST(Integrate, Deterministic) {
  IntegratorConfig cfg;
  cfg.t_end = 0.05;
  const Trajectory t1 = integrate(cfg, Parameters{});
  const Trajectory t2 = integrate(cfg, Parameters{});
  ASSERT_EQ(t1.size(), t2.size());
  for (std::size_t i = 0; i < t1.size(); ++i) {
    ASSERT_EQ(t1.samples[i].t, t2.samples[i].t);
    ASSERT_EQ(t1.samples[i].state, t2.samples[i].state);
    ASSERT_EQ(t1.samples[i].intensity, t2.samples[i].intensity);
  }
}

TEST(Integrate, StopsWhenEmpty) {
  IntegratorConfig cfg;
  cfg.t_end = 100.0;
  cfg.sample_dt = 0.1;
  const Trajectory traj = integrate(cfg, with_coop(0.0));
  EXPECT_LT(traj.back().t, 100.0);
  EXPECT_LT(traj.back().state.a, 1e-12);
}

TEST(Integrate, ConfigErrors) {
  IntegratorConfig cfg;
  cfg.rel_tol = 0.0;
  EXPECT_THROW(integrate(cfg, Parameters{}), DomainError);
  cfg = {};
  cfg.t_end = -1.0;
  EXPECT_THROW(integrate(cfg, Parameters{}), DomainError);
  cfg = {};
  cfg.initial = {1.0, 0.0, -1.0, 0.0};
  EXPECT_THROW(integrate(cfg, Parameters{}), UnphysicalStateError);
  Parameters p;
  p.rho_size = -1.0;
  EXPECT_THROW(integrate(IntegratorConfig{}, p), DomainError);
}

TEST(Integrate, RateFailureReportsTimeAndState) {
  IntegratorConfig cfg;
  cfg.initial = {0.5, 0.0, -1.0, -0.4};
  try {
    integrate(cfg, Parameters{});
    FAIL() << "expected SolverFailure";
  } catch (const StiffnessError&) {
    FAIL() << "wrong failure type";
  } catch (const SolverFailure& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("rate"), std::string::npos) << what;
    EXPECT_NE(what.find("x=-0.4"), std::string::npos) << what;
    EXPECT_EQ(e.time(), 0.0);
  }
}

TEST(Integrate, StepUnderflowIsStiffness) {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-300;
  cfg.abs_tol = 1e-300;
  cfg.t_end = 0.01;
  EXPECT_THROW(integrate(cfg, Parameters{}), StiffnessError);
}

TEST(Integrate, RateScaleMultipliesRates) {
  IntegratorConfig cfg;
  cfg.t_end = 0.002;
  cfg.rate_scale = 1.01;
  const Trajectory traj = integrate(cfg, Parameters{});
  EXPECT_NEAR(traj.front().rates.gamma_plus, 1.01 * golden::kGammaStarFull, 1e-7);
}

TEST(Integrate, KramersKronigModeTracksChirp) {
  Parameters p;
  p.delta_mode = DeltaMode::kramers_kronig;
  IntegratorConfig cfg;
  cfg.t_end = 0.005;
  cfg.chirp_grid.points = 201;
  const Trajectory traj = integrate(cfg, p);
  ASSERT_GT(traj.size(), 3u);
  bool moved = false;
  for (const Sample& s : traj.samples) {
    ASSERT_TRUE(std::isfinite(s.rates.delta));
    moved = moved || std::abs(s.rates.delta) > 1e-6;
    ASSERT_LE(s.witness, 1e-8);
  }
  EXPECT_TRUE(moved);
}

TEST(FindPeak, FreeDecayPeaksAtStart) {
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  const Peak peak = find_peak(integrate(cfg, with_coop(0.0)));
  EXPECT_TRUE(peak.at_boundary);
  EXPECT_EQ(peak.t_max, 0.0);
  EXPECT_EQ(peak.index, 0u);
  EXPECT_NEAR(peak.intensity, 1.0, 1e-12);
}

TEST(FindPeak, ParabolaVertex) {
  Trajectory traj;
  for (double t : {0.0, 1.0, 2.0, 3.0, 4.0}) {
    Sample s;
    s.t = t;
    s.intensity = 5.0 - (t - 2.3) * (t - 2.3);
    traj.samples.push_back(s);
  }
  const Peak peak = find_peak(traj);
  EXPECT_FALSE(peak.at_boundary);
  EXPECT_NEAR(peak.t_max, 2.3, 1e-12);
  EXPECT_NEAR(peak.intensity, 5.0, 1e-12);
  traj.samples.resize(2);
  EXPECT_THROW(find_peak(traj), DomainError);
}

TEST(FindPeak, HeadlineValues) {
  const Peak peak = find_peak(headline());
  EXPECT_FALSE(peak.at_boundary);
  EXPECT_NEAR(peak.intensity, 56.72, 0.05);
  EXPECT_NEAR(peak.t_max, 0.001754, 5e-6);
}

}  // namespace
}  // namespace superrad
