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
#include "superrad/lindblad.hpp"
#include "superrad/rates.hpp"
#include "superrad/spectrum.hpp"

#include <benchmark/benchmark.h>

namespace superrad {
namespace {

void BM_RateRhs(benchmark::State& state) {
  const RateInputs in{0.8, 0.1, 0.0, Parameters{}};
  double g = 30.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rate_rhs(in, g));
    g = g == 30.0 ? 31.0 : 30.0;
  }
}
BENCHMARK(BM_RateRhs);

void BM_SolveCold(benchmark::State& state) {
  const Parameters p;
  for (auto _ : state) benchmark::DoNotOptimize(solve_self_consistent(1.0, 0.0, 0.0, p));
}
BENCHMARK(BM_SolveCold);

void BM_SolveWarm(benchmark::State& state) {
  const Parameters p;
  const double seed = solve_self_consistent(0.8, 0.1, 0.0, p).gamma;
  for (auto _ : state) benchmark::DoNotOptimize(solve_self_consistent(0.8, 0.1, 0.0, p, seed * 1.001));
}
BENCHMARK(BM_SolveWarm);

void BM_IntegrateBurst(benchmark::State& state) {
  IntegratorConfig cfg;
  cfg.t_end = 0.01;
  const Parameters p;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(cfg, p));
}
BENCHMARK(BM_IntegrateBurst)->Unit(benchmark::kMillisecond);

void BM_BuildLiouvillian(benchmark::State& state) {
  const RateSet r = RateSet::symmetric(40.0, 20.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_liouvillian(r));
}
BENCHMARK(BM_BuildLiouvillian);

void BM_ChirpKK(benchmark::State& state) {
  const auto grid = symmetric_grid(1e4, 801, 1.0);
  const SpectralProfile prof = gamma_spectrum(0.9, 0.05, Parameters{}, grid);
  for (auto _ : state) benchmark::DoNotOptimize(chirp_kk(prof, 0.3));
}
BENCHMARK(BM_ChirpKK);

}  // namespace
}  // namespace superrad

BENCHMARK_MAIN();
