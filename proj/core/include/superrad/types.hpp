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

// Domain types shared by every module.
//
// Units: the vacuum decay rate gamma sets the time unit. Rates are reported in
// units of gamma and times in units of 1/gamma. The dipole moment, hbar,
// epsilon_0, the atomic density and the transition frequency only enter
// through the cooperativity C and the effective radius rho = pi d / lambda.

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace superrad {

/// How the collective frequency shift (chirp) is treated.
enum class DeltaMode { zero, kramers_kronig };

std::string_view to_string(DeltaMode mode);
std::optional<DeltaMode> parse_delta_mode(std::string_view text);

struct Parameters {
  double gamma = 1.0;     ///< vacuum single-atom decay rate
  double coop = 10.0;     ///< cooperativity C
  double rho_size = 10.0; ///< effective radial size rho = pi d / lambda
  DeltaMode delta_mode = DeltaMode::zero;
  /// |2a - 1| below which exp(2 zeta)-1 over (2a - 1) uses its series form.
  double series_epsilon = 1e-8;
  /// Relative residual accepted by the self-consistent rate solve.
  double fixed_point_tol = 1e-12;
  /// When false, the detuning-dependent size rho~(Delta) is replaced by rho.
  /// Only useful for diagnostics: it makes Gamma(Delta) even in Delta.
  bool size_detuning = true;

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

/// The four real reduced variables of the two-probe-atom density matrix.
struct ReducedState {
  double a = 1.0;  ///< mean excited-state population per atom
  double d = 0.0;  ///< excited population difference between the atoms
  double n = 1.0;  ///< product of the two inversions
  double x = 0.0;  ///< exchange correlation rho_{ab,ba}

  Eigen::Vector4d as_vector() const { return {a, d, n, x}; }
  static ReducedState from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

  friend bool operator==(const ReducedState&, const ReducedState&) = default;
};

/// Instantaneous dissipative rates, all in units of gamma.
///
/// Gamma_11/22 = gamma_plus +/- gamma_minus, Gamma_12/21 = gammabar_plus +/-
/// gammabar_minus, delta12 = 2(H_11 - H_22)/hbar, delta = 2 H_ii/hbar.
struct RateSet {
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double gammabar_plus = 0.0;
  double gammabar_minus = 0.0;
  double gamma_vac = 1.0;
  double delta12 = 0.0;
  double delta = 0.0;

  /// Rates of the homogeneous small sample: both atoms see the same medium.
  static RateSet symmetric(double gamma, double gammabar, double gamma_vac, double delta = 0.0) {
    return {gamma, 0.0, gammabar, 0.0, gamma_vac, 0.0, delta};
  }
  bool is_symmetric() const { return gamma_minus == 0.0 && gammabar_minus == 0.0 && delta12 == 0.0; }
};

/// Index of a product state in the fixed basis (|aa>, |ab>, |ba>, |bb>),
/// atom 1 first, |a> excited and |b> ground.
enum Basis : int { kAA = 0, kAB = 1, kBA = 2, kBB = 3 };

/// Full 4x4 two-atom density matrix. Entry (i, j) is <i|rho|j> in the basis
/// above, so rho_{ab,ba} in the <alpha_1 gamma_2|rho|beta_1 delta_2> notation is
/// matrix(kAB, kBA).
struct TwoAtomDensityMatrix {
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();

  double population(Basis b) const { return matrix(b, b).real(); }
  std::complex<double> correlation() const { return matrix(kAB, kBA); }
  std::complex<double> trace() const { return matrix.trace(); }
  double min_eigenvalue() const;
  double hermiticity_error() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }

  /// Throws InvalidStateError unless Hermitian to hermitian_tol, trace 1 to
  /// trace_tol and every eigenvalue >= -eigen_tol.
  void validate(double trace_tol = 1e-12, double hermitian_tol = 1e-12, double eigen_tol = 1e-10) const;

  /// |psi><psi| for a normalised vector in the product basis.
  static TwoAtomDensityMatrix pure(const Eigen::Vector4cd& psi);
};

/// One output sample of an integrated trajectory.
struct Sample {
  double t = 0.0;
  ReducedState state;
  RateSet rates;
  double intensity = 0.0;  ///< -da/dt, emission per atom
  double rho_pp = 0.0;     ///< symmetric Dicke population
  double rho_mm = 0.0;     ///< antisymmetric (subradiant) population
  double witness = 0.0;    ///< positive means entangled
};

struct Trajectory {
  std::vector<Sample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }
};

}  // namespace superrad
