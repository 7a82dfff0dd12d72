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

// Dormand-Prince 5(4) stepper with PI step-size control and the 4th-order
// continuous extension, for Eigen column vectors (real or complex).
//
// The caller owns the time loop: step() performs exactly one accepted step and
// dense() interpolates inside it. That lets drivers insert output samples,
// project the state between steps (restart()), or change the right-hand side.

#pragma once

#include "superrad/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace superrad {

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  ///< 0 selects the step automatically
};

template <class Vec, class Rhs>
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, double t0, Vec y0, StepControl control)
      : rhs_(std::move(rhs)), control_(control), t_(t0), y_(std::move(y0)) {
    k1_ = rhs_(t_, y_);
    h_ = control_.initial_step > 0.0 ? std::min(control_.initial_step, control_.max_step) : initial_step();
  }

  double t() const { return t_; }
  double t_prev() const { return t_prev_; }
  const Vec& y() const { return y_; }
  const Vec& y_prev() const { return y_prev_; }
  /// f(t, y) at the current point (first-same-as-last stage).
  const Vec& derivative() const { return k1_; }
  /// f at the start of the last accepted step.
  const Vec& derivative_prev() const { return k1_prev_; }
  double next_step() const { return h_; }
  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }

  /// Replace the current state (after a projection or a change of the
  /// right-hand side) and recompute the derivative there.
  void restart(const Vec& y) {
    y_ = y;
    k1_ = rhs_(t_, y_);
  }

  /// Take one accepted step, never past t_limit.
  void step(double t_limit) {
    bool last_rejected = false;
    for (;;) {
      const double remaining = t_limit - t_;
      if (!(remaining > 0.0)) throw SolverFailure("step requested past the integration limit", t_);
      double h = std::min({h_, control_.max_step, remaining});
      const bool clipped = h == remaining;
      if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_))) {
        std::ostringstream msg;
        msg << "step size underflow (h = " << h << ") at t = " << t_ << "; the problem is too stiff for "
            << "the explicit integrator, try a smaller max_step";
        throw StiffnessError(msg.str(), t_);
      }

      double err;
      try {
        err = attempt(h);
      } catch (const StiffnessError&) {
        throw;
      } catch (const Error& e) {
        // A stage landed outside the domain of the right-hand side: shrink.
        if (h < 1e-10 * std::max(1.0, std::abs(t_))) {
          std::ostringstream msg;
          msg << e.what() << " (at t = " << t_ << ", step " << h << ")";
          throw SolverFailure(msg.str(), t_);
        }
        h_ = 0.25 * h;
        last_rejected = true;
        ++rejected_;
        continue;
      }

      const double fac11 = std::pow(err, kExpo1);
      if (err <= 1.0) {
        double fac = fac11 / std::pow(facold_, kBeta);
        fac = std::clamp(fac / kSafe, kFacMin, kFacMax);
        double h_new = h / fac;
        if (last_rejected) h_new = std::min(h_new, h);
        facold_ = std::max(err, 1e-4);

        t_prev_ = t_;
        y_prev_ = std::move(y_);
        k1_prev_ = std::move(k1_);
        h_last_ = h;
        t_ = clipped ? t_limit : t_ + h;
        y_ = y_new_;
        k1_ = k7_;
        // keep the controller's proposal unless the step was clipped short
        h_ = clipped ? std::max(h_, h_new) : h_new;
        ++accepted_;
        prepare_dense();
        return;
      }
      h_ = h / std::min(kFacMax, fac11 / kSafe);
      last_rejected = true;
      ++rejected_;
    }
  }

  /// State at t inside the last accepted step [t_prev(), t()].
  Vec dense(double t) const {
    if (t == t_) return y_;
    const double theta = (t - t_prev_) / h_last_;
    const double theta1 = 1.0 - theta;
    return Vec(r1_ + theta * (r2_ + theta1 * (r3_ + theta * (r4_ + theta1 * r5_))));
  }

 private:
  static constexpr double kBeta = 0.04;
  static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
  static constexpr double kSafe = 0.9;
  static constexpr double kFacMin = 0.1;  // at most 10x growth
  static constexpr double kFacMax = 5.0;  // at most 5x shrink

  // Butcher tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  double scaled_norm(const Vec& e, const Vec& y0, const Vec& y1) const {
    const auto scale = (control_.abs_tol + control_.rel_tol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array());
    return std::sqrt((e.cwiseAbs().array() / scale).square().mean());
  }

  double initial_step() {
    const auto sk = (control_.abs_tol + control_.rel_tol * y_.cwiseAbs().array()).eval();
    const double dnf = (k1_.cwiseAbs().array() / sk).square().sum();
    const double dny = (y_.cwiseAbs().array() / sk).square().sum();
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    if (!std::isfinite(h) || !(h > 0.0)) h = 1e-6;  // extreme tolerances overflow the norms
    h = std::min(h, control_.max_step);
    const Vec y1 = y_ + h * k1_;
    const Vec f1 = rhs_(t_ + h, y1);
    const double der2 = std::sqrt(((f1 - k1_).cwiseAbs().array() / sk).square().sum()) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    if (!std::isfinite(h1) || !(h1 > 0.0)) h1 = h;
    return std::min({100.0 * h, h1, control_.max_step});
  }

  double attempt(double h) {
    const Vec& y0 = y_;
    const double t = t_;
    k2_ = rhs_(t + c2 * h, Vec(y0 + h * (a21 * k1_)));
    k3_ = rhs_(t + c3 * h, Vec(y0 + h * (a31 * k1_ + a32 * k2_)));
    k4_ = rhs_(t + c4 * h, Vec(y0 + h * (a41 * k1_ + a42 * k2_ + a43 * k3_)));
    k5_ = rhs_(t + c5 * h, Vec(y0 + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_)));
    k6_ = rhs_(t + h, Vec(y0 + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_)));
    y_new_ = y0 + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    k7_ = rhs_(t + h, y_new_);
    const Vec err = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    const double norm = scaled_norm(err, y0, y_new_);
    if (!std::isfinite(norm)) return 1e10;
    return norm;
  }

  void prepare_dense() {
    const double h = h_last_;
    const Vec diff = y_ - y_prev_;
    const Vec bspl = h * k1_prev_ - diff;
    r1_ = y_prev_;
    r2_ = diff;
    r3_ = bspl;
    r4_ = diff - h * k1_ - bspl;
    r5_ = h * (d1 * k1_prev_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k1_);
  }

  Rhs rhs_;
  StepControl control_;
  double t_;
  double t_prev_ = 0.0;
  double h_ = 0.0;
  double h_last_ = 0.0;
  double facold_ = 1e-4;
  long accepted_ = 0;
  long rejected_ = 0;
  Vec y_, y_prev_, y_new_;
  Vec k1_, k1_prev_, k2_, k3_, k4_, k5_, k6_, k7_;
  Vec r1_, r2_, r3_, r4_, r5_;
};

template <class Vec, class Rhs>
DormandPrince<Vec, Rhs> make_dormand_prince(Rhs rhs, double t0, Vec y0, StepControl control) {
  return DormandPrince<Vec, Rhs>(std::move(rhs), t0, std::move(y0), control);
}

}  // namespace superrad
