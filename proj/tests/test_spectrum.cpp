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

#include "superrad/errors.hpp"
#include "superrad/rates.hpp"
#include "superrad/spectrum.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace superrad {
namespace {

SpectralProfile lorentzian(double amplitude, double width, const std::vector<double>& grid) {
  SpectralProfile p{grid, {}};
  for (double d : grid) p.gamma.push_back(amplitude * width * width / (width * width + d * d));
  return p;
}

TEST(SymmetricGrid, Shape) {
  for (std::size_t n : {2u, 3u, 10u, 801u}) {
    const auto g = symmetric_grid(50.0, n, 0.5);
    ASSERT_EQ(g.size(), n);
    EXPECT_EQ(g.front(), -50.0);
    EXPECT_EQ(g.back(), 50.0);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(g[i], -g[n - 1 - i]);
      if (i > 0) EXPECT_GT(g[i], g[i - 1]);
    }
    if (n % 2 == 1) EXPECT_EQ(g[n / 2], 0.0);
  }
  EXPECT_THROW(symmetric_grid(1.0, 1, 1.0), DomainError);
  EXPECT_THROW(symmetric_grid(0.0, 5, 1.0), DomainError);
}

TEST(SpectralProfile, Validation) {
  SpectralProfile ok{{-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}};
  EXPECT_NO_THROW(ok.validate());
  SpectralProfile lopsided{{-1.0, 0.0, 2.0}, {0.0, 1.0, 0.0}};
  EXPECT_THROW(lopsided.validate(), DomainError);
  SpectralProfile unordered{{-1.0, 1.0, 0.5}, {0.0, 1.0, 0.0}};
  EXPECT_THROW(unordered.validate(), DomainError);
  SpectralProfile mismatched{{-1.0, 1.0}, {0.0}};
  EXPECT_THROW(mismatched.validate(), DomainError);
}

TEST(ChirpKK, ZeroProfile) {
  const auto g = symmetric_grid(100.0, 101, 1.0);
  const SpectralProfile p{g, std::vector<double>(g.size(), 0.0)};
  EXPECT_EQ(chirp_kk(p, 0.0), 0.0);
  EXPECT_EQ(chirp_kk(p, 3.0), 0.0);
}

TEST(ChirpKK, EvenProfileVanishesAtCentre) {
  const auto g = symmetric_grid(1e3, 401, 0.7);
  EXPECT_LT(std::abs(chirp_kk(lorentzian(3.0, 1.3, g), 0.0)), 1e-10);
  SpectralProfile gauss{g, {}};
  for (double d : g) gauss.gamma.push_back(std::exp(-d * d / 8.0));
  EXPECT_LT(std::abs(chirp_kk(gauss, 0.0)), 1e-10);
}

TEST(ChirpKK, OddProfileGivesOddChirp) {
  const auto g = symmetric_grid(1e3, 401, 0.7);
  const SpectralProfile p = lorentzian(2.0, 1.0, g);
  EXPECT_NEAR(chirp_kk(p, 0.8), -chirp_kk(p, -0.8), 1e-12);
}

TEST(ChirpKK, LorentzianHilbertPair) {
  const double amplitude = 2.5;
  for (double w : {0.5, 1.0, 4.0}) {
    const auto g = symmetric_grid(1e4 * w, 2001, 0.25 * w);
    const SpectralProfile p = lorentzian(amplitude, w, g);
    for (double delta : {0.5 * w, w, 2.0 * w}) {
      const ChirpResult c = chirp_kk_detailed(p, delta);
      const double exact = amplitude * w * delta / (w * w + delta * delta);
      EXPECT_NEAR(c.chirp, exact, 1e-4) << "w = " << w << " delta = " << delta;
      EXPECT_GE(c.tail_bound, 0.0);
    }
  }
}

TEST(ChirpKK, OutsideGridIsDomainError) {
  const auto g = symmetric_grid(10.0, 21, 1.0);
  const SpectralProfile p = lorentzian(1.0, 1.0, g);
  EXPECT_THROW(chirp_kk(p, 10.0), DomainError);
  EXPECT_THROW(chirp_kk(p, -11.0), DomainError);
  EXPECT_NO_THROW(chirp_kk(p, 9.99));
}

TEST(GammaSpectrum, CentreMatchesDirectSolve) {
  Parameters params;
  const auto g = symmetric_grid(1e3, 201, 1.0);
  const SpectralProfile prof = gamma_spectrum(1.0, 0.0, params, g);
  const double direct = solve_self_consistent(1.0, 0.0, 0.0, params).gamma;
  EXPECT_NEAR(prof.gamma[100], direct, 1e-12 * direct);
}

TEST(GammaSpectrum, FallsOffFarFromResonance) {
  Parameters params;
  const std::vector<double> g{-1e6, 0.0, 1e6};
  const SpectralProfile prof = gamma_spectrum(1.0, 0.0, params, g);
  EXPECT_LT(prof.gamma[2], 1e-6 * prof.gamma[1]);
  EXPECT_LT(prof.gamma[0], 1e-6 * prof.gamma[1]);
}

TEST(GammaSpectrum, EvenWithoutSizeDetuning) {
  Parameters params;
  params.size_detuning = false;
  const auto g = symmetric_grid(1e3, 161, 1.0);
  for (double a : {1.0, 0.7}) {
    const SpectralProfile prof = gamma_spectrum(a, 0.05, params, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(prof.gamma[i], prof.gamma[g.size() - 1 - i], 1e-12 * std::max(1.0, prof.gamma[i]));
    }
    EXPECT_LT(std::abs(chirp_kk(prof, 0.0)), 1e-10);
    // point-wise agreement with independent cold solves at +/- detuning
    for (double d : {0.5, 20.0}) {
      const double plus = solve_self_consistent(a, 0.05, d, params).gamma;
      const double minus = solve_self_consistent(a, 0.05, -d, params).gamma;
      EXPECT_NEAR(plus, minus, 1e-12 * std::max(1.0, plus));
    }
  }
}

TEST(GammaSpectrum, ErrorsNameTheDetuning) {
  Parameters params;
  const std::vector<double> g{-1.0, 0.0, 1.0};
  try {
    gamma_spectrum(0.5, -0.4, params, g);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("detuning"), std::string::npos);
  }
  EXPECT_THROW(gamma_spectrum(1.0, 0.0, params, {}), DomainError);
}

}  // namespace
}  // namespace superrad
