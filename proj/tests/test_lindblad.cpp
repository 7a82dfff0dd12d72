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
#include "superrad/lindblad.hpp"
#include "superrad/ode.hpp"
#include "superrad/state.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace superrad {
namespace {

using cd = std::complex<double>;

TwoAtomDensityMatrix random_density(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = cd(n(rng), n(rng));
  Eigen::Matrix4cd rho = g * g.adjoint();
  rho /= rho.trace();
  return {rho};
}

RateSet random_rates(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RateSet r;
  r.gamma_plus = 5.0 * u(rng);
  r.gamma_minus = r.gamma_plus * (2.0 * u(rng) - 1.0);
  r.gammabar_plus = 3.0 * u(rng);
  r.gammabar_minus = r.gammabar_plus * (2.0 * u(rng) - 1.0);
  r.gamma_vac = 0.5 + u(rng);
  r.delta12 = 4.0 * u(rng) - 2.0;
  r.delta = 4.0 * u(rng) - 2.0;
  return r;
}

// Time derivatives of (a, d, n, x) implied by drho/dt; linear in its argument.
GeneralState reduced_derivative(const Eigen::Matrix4cd& drho) {
  GeneralState g;
  g.a = drho(kAA, kAA).real() + 0.5 * (drho(kAB, kAB).real() + drho(kBA, kBA).real());
  g.d = drho(kAB, kAB).real() - drho(kBA, kBA).real();
  g.n = drho(kAA, kAA).real() - drho(kAB, kAB).real() - drho(kBA, kBA).real() + drho(kBB, kBB).real();
  g.x = drho(kAB, kBA);
  return g;
}

TEST(Vectorize, RowMajorRoundTrip) {
  std::mt19937_64 rng(1);
  const TwoAtomDensityMatrix rho = random_density(rng);
  const SuperVector v = vectorize(rho);
  EXPECT_EQ(v[4 * 1 + 2], rho.matrix(1, 2));
  EXPECT_EQ(v[4 * 3 + 0], rho.matrix(3, 0));
  EXPECT_EQ(unvectorize(v).matrix, rho.matrix);
}

TEST(BuildLiouvillian, ZeroRatesGiveZeroMatrix) {
  RateSet r{};
  r.gamma_vac = 0.0;
  EXPECT_EQ(build_liouvillian(r).matrix.cwiseAbs().maxCoeff(), 0.0);
}

TEST(BuildLiouvillian, TracePreserving) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Liouvillian L = build_liouvillian(random_rates(rng), trial % 2 == 0 ? 0.0 : 0.3);
    for (int k = 0; k < 16; ++k) {
      SuperVector e = SuperVector::Zero();
      e[k] = 1.0;
      EXPECT_LT(std::abs(unvectorize(L.apply(e)).trace()), 1e-12);
    }
  }
}

TEST(BuildLiouvillian, AgreesWithDirectMatrixProducts) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const RateSet r = random_rates(rng);
    const TwoAtomDensityMatrix rho = random_density(rng);
    const double cross = 0.1 * trial;
    const auto via_super = build_liouvillian(r, cross).apply(rho);
    const auto direct = master_equation_rhs(rho, r, cross);
    EXPECT_LT((via_super.matrix - direct.matrix).cwiseAbs().maxCoeff(), 1e-12);
    // Hermiticity is preserved once the cross pump is symmetric
    RateSet sym = r;
    sym.gammabar_minus = 0.0;
    EXPECT_LT(master_equation_rhs(rho, sym, cross).hermiticity_error(), 1e-12);
  }
}

TEST(BuildLiouvillian, ReproducesSmallSampleEquations) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const ReducedState s{0.3 + 0.4 * u(rng), 0.0, 0.1 * u(rng) - 0.05, 0.1 * u(rng)};
    const RateSet r = RateSet::symmetric(20.0 * u(rng), 20.0 * u(rng), 1.0);
    const GeneralState full = reduced_derivative(build_liouvillian(r).apply(reconstruct(s)).matrix);
    const ReducedState red = rhs_small_sample(s, r);
    EXPECT_NEAR(full.a, red.a, 1e-12);
    EXPECT_NEAR(full.d, red.d, 1e-12);
    EXPECT_NEAR(full.n, red.n, 1e-12);
    EXPECT_NEAR(full.x.real(), red.x, 1e-12);
    EXPECT_NEAR(full.x.imag(), 0.0, 1e-12);
  }
}

TEST(BuildLiouvillian, ReproducesGeneralEquations) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    RateSet r = random_rates(rng);
    r.delta = 0.0;
    // X-state with complex correlation and unequal atoms
    TwoAtomDensityMatrix rho;
    rho.matrix(kAA, kAA) = 0.3;
    rho.matrix(kAB, kAB) = 0.25;
    rho.matrix(kBA, kBA) = 0.15;
    rho.matrix(kBB, kBB) = 0.3;
    const cd x(0.1 * u(rng), 0.1 * u(rng) - 0.05);
    rho.matrix(kAB, kBA) = x;
    rho.matrix(kBA, kAB) = std::conj(x);
    const ReducedState s = reduce(rho);
    const GeneralState full = reduced_derivative(build_liouvillian(r).apply(rho).matrix);
    const GeneralState red = rhs_general({s.a, s.d, s.n, x}, r);
    EXPECT_NEAR(full.a, red.a, 1e-12);
    EXPECT_NEAR(full.d, red.d, 1e-12);
    EXPECT_NEAR(full.n, red.n, 1e-12);
    EXPECT_NEAR(std::abs(full.x - red.x), 0.0, 1e-12);
  }
}

TEST(BuildLiouvillian, FreeDecayProductForm) {
  RateSet r{};
  r.gamma_vac = 1.0;
  const Liouvillian L = build_liouvillian(r);
  auto rhs = [&](double, const SuperVector& v) -> SuperVector { return L.apply(v); };
  StepControl control;
  control.rel_tol = 1e-12;
  control.abs_tol = 1e-14;
  TwoAtomDensityMatrix aa;
  aa.matrix(kAA, kAA) = 1.0;
  auto stepper = make_dormand_prince<SuperVector>(rhs, 0.0, vectorize(aa), control);
  for (double t : {0.5, 1.0, 3.0}) {
    while (stepper.t() < t) stepper.step(t);
    const TwoAtomDensityMatrix rho = unvectorize(stepper.y());
    EXPECT_NEAR(rho.population(kAA), std::exp(-2.0 * t), 1e-10);
    EXPECT_NEAR(rho.population(kBB), std::pow(1.0 - std::exp(-t), 2), 1e-10);
    EXPECT_NEAR(rho.population(kAB), std::exp(-t) * (1.0 - std::exp(-t)), 1e-10);
  }
}

TEST(Propagate, FreeDecayMatchesProductForm) {
  Parameters p;
  p.coop = 0.0;
  IntegratorConfig cfg;
  cfg.t_end = 5.0;
  cfg.sample_dt = 0.01;
  const OracleTrajectory traj = propagate(reconstruct({1.0, 0.0, 1.0, 0.0}), p, cfg);
  ASSERT_EQ(traj.t.size(), 501u);
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const double e = std::exp(-traj.t[i]);
    EXPECT_NEAR(traj.rho[i].population(kAA), e * e, 1e-8);
    EXPECT_NEAR(traj.rho[i].population(kBB), (1.0 - e) * (1.0 - e), 1e-8);
  }
}

TEST(Propagate, MatchesReducedTrajectory) {
  Parameters p;
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  const Trajectory reduced = integrate(cfg, p);
  const OracleTrajectory full = propagate(reconstruct(cfg.initial), p, cfg);
  std::size_t j = 0, shared = 0;
  for (std::size_t i = 0; i < full.t.size(); ++i) {
    while (reduced.samples[j].t < full.t[i]) ++j;
    if (reduced.samples[j].t != full.t[i]) continue;
    ++shared;
    const ReducedState r = reduce(full.rho[i]);
    const ReducedState& q = reduced.samples[j].state;
    ASSERT_NEAR(r.a, q.a, 1e-6) << "t = " << full.t[i];
    ASSERT_NEAR(r.n, q.n, 1e-6) << "t = " << full.t[i];
    ASSERT_NEAR(r.x, q.x, 1e-6) << "t = " << full.t[i];
  }
  EXPECT_EQ(shared, full.t.size());
}

TEST(Propagate, InvariantsAlongBurst) {
  Parameters p;
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  const OracleTrajectory full = propagate(reconstruct(cfg.initial), p, cfg);
  for (const TwoAtomDensityMatrix& rho : full.rho) {
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-10);
    EXPECT_NEAR(rho.trace().imag(), 0.0, 1e-10);
    EXPECT_GE(rho.min_eigenvalue(), -1e-8);
    EXPECT_LE(std::abs(rho.correlation().imag()), 1e-10);
    double off_x = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const bool x_entry = i == j || (i == kAB && j == kBA) || (i == kBA && j == kAB);
        if (!x_entry) off_x = std::max(off_x, std::abs(rho.matrix(i, j)));
      }
    EXPECT_LE(off_x, 1e-10);
    EXPECT_LE(entanglement_witness(rho), 1e-8);
  }
}

TEST(Propagate, GeneralInitialStateKeepsTrace) {
  // product of two coherent superpositions: not X-structured
  Eigen::Vector2cd one(std::sqrt(0.7), cd(0.0, std::sqrt(0.3)));
  Eigen::Vector4cd psi;
  psi << one[0] * one[0], one[0] * one[1], one[1] * one[0], one[1] * one[1];
  Parameters p;
  p.coop = 0.0;
  IntegratorConfig cfg;
  cfg.t_end = 3.0;
  cfg.sample_dt = 0.05;
  const OracleTrajectory traj = propagate(TwoAtomDensityMatrix::pure(psi), p, cfg);
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    EXPECT_NEAR(std::abs(traj.rho[i].trace() - 1.0), 0.0, 1e-10);
    EXPECT_GE(traj.rho[i].min_eigenvalue(), -1e-8);
    // single-atom coherence <a|rho_1|b> decays at gamma / 2
    const double coh = std::abs(traj.rho[i].matrix(kAA, kBA) + traj.rho[i].matrix(kAB, kBB));
    EXPECT_NEAR(coh, std::sqrt(0.7 * 0.3) * std::exp(-0.5 * traj.t[i]), 1e-8);
  }
}

TEST(Propagate, UnphysicalCrossDecayIsCaught) {
  Parameters p;
  p.coop = 0.0;
  IntegratorConfig cfg;
  cfg.t_end = 5.0;
  OracleOptions opts;
  opts.gamma_cross = 3.0;  // |gamma_12| > gamma: not a valid dissipator
  EXPECT_THROW(propagate(reconstruct({0.5, 0.0, -1.0, -0.5}), p, cfg, opts), OracleIntegrityError);
}

TEST(Propagate, RejectsInvalidInitialState) {
  TwoAtomDensityMatrix rho;
  rho.matrix(kAA, kAA) = 0.5;
  EXPECT_THROW(propagate(rho, Parameters{}, IntegratorConfig{}), InvalidStateError);
}

TEST(SpectralCheck, VacuumDecayRelaxesToGround) {
  RateSet r{};
  r.gamma_vac = 1.0;
  const SpectralReport rep = spectral_check(build_liouvillian(r));
  EXPECT_LE(rep.abscissa, 1e-10);
  EXPECT_EQ(rep.kernel_dimension, 1);
  ASSERT_TRUE(rep.stationary.has_value());
  EXPECT_NEAR(rep.stationary->population(kBB), 1.0, 1e-10);
  EXPECT_LT((rep.stationary->matrix - Eigen::Matrix4cd(Eigen::Vector4cd(0, 0, 0, 1).asDiagonal())).norm(), 1e-10);
}

TEST(SpectralCheck, ZeroGenerator) {
  RateSet r{};
  r.gamma_vac = 0.0;
  const SpectralReport rep = spectral_check(build_liouvillian(r));
  EXPECT_EQ(rep.kernel_dimension, 16);
  for (const cd& ev : rep.eigenvalues) EXPECT_EQ(std::abs(ev), 0.0);
  EXPECT_FALSE(rep.stationary.has_value());
}

TEST(SpectralCheck, MidBurstRatesAreStable) {
  IntegratorConfig cfg;
  cfg.t_end = 0.004;
  const Trajectory traj = integrate(cfg, Parameters{});
  const Peak peak = find_peak(traj);
  const RateSet rates = traj.samples[peak.index].rates;
  EXPECT_GT(rates.gamma_plus, 25.0);
  const SpectralReport rep = spectral_check(build_liouvillian(rates));
  EXPECT_LE(rep.abscissa, 1e-10);
  ASSERT_TRUE(rep.stationary.has_value());
  EXPECT_NEAR(rep.stationary->trace().real(), 1.0, 1e-12);
  EXPECT_GE(rep.stationary->min_eigenvalue(), -1e-10);
}

}  // namespace
}  // namespace superrad
