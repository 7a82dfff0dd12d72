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

#include "superrad/lindblad.hpp"

#include "superrad/errors.hpp"
#include "superrad/ode.hpp"
#include "superrad/rates.hpp"
#include "superrad/state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <sstream>

namespace superrad {
namespace {

using Matrix4 = Eigen::Matrix4cd;
using Matrix2 = Eigen::Matrix2cd;
using cd = std::complex<double>;

constexpr double kEmptyPopulation = 1e-12;
constexpr double kKernelTol = 1e-10;

Matrix4 kron(const Matrix2& A, const Matrix2& B) {
  Matrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = A(i, j) * B;
  return out;
}

SuperMatrix kron(const Matrix4& A, const Matrix4& B) {
  SuperMatrix out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = A(i, j) * B;
  return out;
}

// Lowering operators of atom 1 and atom 2 in the (aa, ab, ba, bb) basis.
std::array<Matrix4, 2> lowering_operators() {
  Matrix2 s = Matrix2::Zero();
  s(1, 0) = 1.0;  // |b><a|
  const Matrix2 id = Matrix2::Identity();
  return {kron(s, id), kron(id, s)};
}

struct Coefficients {
  Eigen::Matrix2d pump;   // K_ij
  Eigen::Matrix2d decay;  // K_ij + g_ij
  std::array<double, 2> h;
};

Coefficients coefficients(const RateSet& r, double gamma_cross) {
  Coefficients c;
  c.pump << r.gamma_plus + r.gamma_minus, r.gammabar_plus - r.gammabar_minus,
      r.gammabar_plus + r.gammabar_minus, r.gamma_plus - r.gamma_minus;
  Eigen::Matrix2d vac;
  vac << r.gamma_vac, gamma_cross, gamma_cross, r.gamma_vac;
  c.decay = c.pump + vac;
  c.h = {0.5 * r.delta + 0.25 * r.delta12, 0.5 * r.delta - 0.25 * r.delta12};
  return c;
}

SuperMatrix left(const Matrix4& A) { return kron(A, Matrix4::Identity()); }
SuperMatrix right(const Matrix4& B) { return kron(Matrix4::Identity(), Matrix4(B.transpose())); }

std::string describe(double t, const TwoAtomDensityMatrix& rho, double eig) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "density matrix lost positivity at t = " << t << " (min eigenvalue " << eig << ", trace "
      << rho.trace().real() << ")";
  return msg.str();
}

}  // namespace

SuperVector vectorize(const TwoAtomDensityMatrix& rho) {
  SuperVector v;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v[4 * i + j] = rho.matrix(i, j);
  return v;
}

TwoAtomDensityMatrix unvectorize(const SuperVector& v) {
  TwoAtomDensityMatrix rho;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho.matrix(i, j) = v[4 * i + j];
  return rho;
}

TwoAtomDensityMatrix Liouvillian::apply(const TwoAtomDensityMatrix& rho) const {
  return unvectorize(matrix * vectorize(rho));
}

Liouvillian build_liouvillian(const RateSet& rates, double gamma_cross) {
  const auto sig = lowering_operators();
  const Coefficients c = coefficients(rates, gamma_cross);
  const cd i1(0.0, 1.0);
  Liouvillian L;
  for (int j = 0; j < 2; ++j) {
    if (c.h[j] == 0.0) continue;
    const Matrix4 comm = sig[j] * sig[j].adjoint() - sig[j].adjoint() * sig[j];
    L.matrix += i1 * c.h[j] * (left(comm) - right(comm));
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Matrix4 si = sig[i];
      const Matrix4 sjd = sig[j].adjoint();
      if (c.pump(i, j) != 0.0) {
        const Matrix4 m = si * sjd;
        L.matrix += c.pump(i, j) * (kron(sjd, Matrix4(si.transpose())) - 0.5 * left(m) - 0.5 * right(m));
      }
      if (c.decay(i, j) != 0.0) {
        const Matrix4 m = sjd * si;
        L.matrix += c.decay(i, j) * (kron(si, Matrix4(sjd.transpose())) - 0.5 * left(m) - 0.5 * right(m));
      }
    }
  }
  return L;
}

TwoAtomDensityMatrix master_equation_rhs(const TwoAtomDensityMatrix& state, const RateSet& rates,
                                         double gamma_cross) {
  const auto sig = lowering_operators();
  const Coefficients c = coefficients(rates, gamma_cross);
  const Matrix4& rho = state.matrix;
  const cd i1(0.0, 1.0);
  Matrix4 out = Matrix4::Zero();
  for (int j = 0; j < 2; ++j) {
    const Matrix4 comm = sig[j] * sig[j].adjoint() - sig[j].adjoint() * sig[j];
    out += i1 * c.h[j] * (comm * rho - rho * comm);
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Matrix4& si = sig[i];
      const Matrix4 sjd = sig[j].adjoint();
      const Matrix4 up = si * sjd;
      const Matrix4 down = sjd * si;
      out += c.pump(i, j) * (sjd * rho * si - 0.5 * (up * rho + rho * up));
      out += c.decay(i, j) * (si * rho * sjd - 0.5 * (down * rho + rho * down));
    }
  }
  return {out};
}

OracleTrajectory propagate(const TwoAtomDensityMatrix& rho0, const Parameters& params,
                           const IntegratorConfig& config, const OracleOptions& options) {
  params.validate();
  config.validate();
  rho0.validate(1e-10, 1e-10, 1e-10);

  const bool track_chirp = params.delta_mode == DeltaMode::kramers_kronig;
  double delta = 0.0;
  if (track_chirp) delta = chirp_for_state(reduce(rho0), params, config.chirp_grid, 0.0);

  std::optional<double> warm;
  auto rhs = [&](double, const SuperVector& v) -> SuperVector {
    const TwoAtomDensityMatrix rho = unvectorize(v);
    const ReducedState s = reduce(rho, 1e-8);
    const RateSolution sol = solve_self_consistent(s.a, s.x, delta, params, warm);
    warm = sol.gamma;
    const RateSet rates = RateSet::symmetric(config.rate_scale * sol.gamma, config.rate_scale * sol.gammabar,
                                             params.gamma, delta);
    return build_liouvillian(rates, options.gamma_cross).apply(v);
  };

  OracleTrajectory out;
  auto emit = [&](double t, const SuperVector& v) {
    TwoAtomDensityMatrix rho = unvectorize(v);
    rho.matrix = 0.5 * (rho.matrix + rho.matrix.adjoint()).eval();
    const double eig = rho.min_eigenvalue();
    if (eig < -options.positivity_tol) throw OracleIntegrityError(describe(t, rho, eig), t);
    out.t.push_back(t);
    out.rho.push_back(rho);
  };

  StepControl control;
  control.rel_tol = config.rel_tol;
  control.abs_tol = config.abs_tol;
  control.max_step = config.effective_max_step(params);

  const double t_end = config.t_end;
  const double dt = config.sample_dt;
  try {
    auto stepper = make_dormand_prince<SuperVector>(rhs, 0.0, vectorize(rho0), control);
    emit(0.0, stepper.y());
    long next_cadence = 1;
    while (stepper.t() < t_end) {
      stepper.step(t_end);
      const double t1 = stepper.t();
      bool emitted = false;
      for (;; ++next_cadence) {
        const double tc = static_cast<double>(next_cadence) * dt;
        if (tc > t1 || tc >= t_end) break;
        emit(tc, stepper.dense(tc));
        emitted = true;
      }
      const bool finished = t1 >= t_end || stepper.y()[0].real() < kEmptyPopulation;
      if (finished) {
        if (t1 > out.t.back()) emit(t1, stepper.y());
        break;
      }
      if (track_chirp && emitted) delta = chirp_for_state(reduce(out.rho.back()), params, config.chirp_grid, delta);
      TwoAtomDensityMatrix rho = unvectorize(stepper.y());
      rho.matrix = 0.5 * (rho.matrix + rho.matrix.adjoint()).eval();
      stepper.restart(vectorize(rho));
    }
  } catch (const SolverFailure&) {
    throw;
  } catch (const Error& e) {
    const double t = out.t.empty() ? 0.0 : out.t.back();
    throw SolverFailure(std::string("oracle rate solve failed: ") + e.what(), t);
  }
  return out;
}

SpectralReport spectral_check(const Liouvillian& L) {
  Eigen::ComplexEigenSolver<SuperMatrix> solver(L.matrix, true);
  if (solver.info() != Eigen::Success) throw DomainError("spectral_check: eigen decomposition failed");
  SpectralReport report;
  const auto& values = solver.eigenvalues();
  std::vector<int> order(16);
  for (int k = 0; k < 16; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return values[l].real() > values[r].real(); });
  const double scale = std::max(1.0, L.matrix.cwiseAbs().maxCoeff());
  int nearest = 0;
  for (int k : order) {
    report.eigenvalues.push_back(values[k]);
    if (std::abs(values[k]) <= kKernelTol * scale) ++report.kernel_dimension;
    if (std::abs(values[k]) < std::abs(values[nearest])) nearest = k;
  }
  report.abscissa = report.eigenvalues.front().real();
  if (report.kernel_dimension == 1) {
    TwoAtomDensityMatrix rho = unvectorize(solver.eigenvectors().col(nearest));
    const cd tr = rho.trace();
    if (std::abs(tr) > 1e-12) {
      rho.matrix /= tr;
      rho.matrix = 0.5 * (rho.matrix + rho.matrix.adjoint()).eval();
      report.stationary = rho;
    }
  }
  return report;
}

}  // namespace superrad
