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

#include "superrad/rates.hpp"

#include "superrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace superrad {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPopulationSlack = 1e-12;
constexpr double kGammaCeiling = 1e12;  // in units of gamma
constexpr int kScanPoints = 64;
constexpr int kMaxRefine = 300;

// z e^z - (e^z - 1) = sum_{k>=2} (k-1) z^k / k!
double zexp_minus_expm1(double z) {
  if (std::abs(z) > 0.5) return z * std::exp(z) - std::expm1(z);
  double term = z;  // z^k / k! at k = 1
  double sum = 0.0;
  for (int k = 2; k < 30; ++k) {
    term *= z / k;
    const double add = (k - 1) * term;
    sum += add;
    if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// rho - sin(rho) = sum_{k>=1} (-1)^{k+1} rho^{2k+1} / (2k+1)!
double x_minus_sin(double r) {
  if (std::abs(r) > 0.5) return r - std::sin(r);
  const double r2 = r * r;
  double term = r;
  double sum = 0.0;
  for (int k = 1; k < 20; ++k) {
    term *= -r2 / ((2.0 * k) * (2.0 * k + 1.0));
    sum -= term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double clamp_population(double a) {
  if (!(a >= -kPopulationSlack && a <= 1.0 + kPopulationSlack)) {
    std::ostringstream msg;
    msg << "population a = " << a << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  return std::clamp(a, 0.0, 1.0);
}

}  // namespace

double expm1_ratio(double z) {
  if (std::abs(z) < 1e-5) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  return std::expm1(z) / z;
}

double geometric_factor(double zeta, double rho) {
  const double r2 = zeta * zeta + rho * rho;
  if (r2 < 1e-150) return 0.25;

  if (zeta > 20.0) {
    // Factor e^{2 zeta} out so that large zeta overflows only when I itself does.
    const double em = std::exp(-zeta);
    const double u = zeta - 1.0 + std::cos(rho) * em;
    const double v = rho - std::sin(rho) * em;
    return std::exp(2.0 * zeta + std::log(u * u + v * v) - 2.0 * std::log(r2));
  }
  // (zeta-1)e^zeta + cos rho, rearranged to avoid cancellation near the origin
  const double u = zexp_minus_expm1(zeta) - 2.0 * std::pow(std::sin(0.5 * rho), 2);
  // rho e^zeta - sin rho
  const double v = rho * std::expm1(zeta) + x_minus_sin(rho);
  return (u * u + v * v) / (r2 * r2);
}

RateEvaluation rate_rhs(const RateInputs& inputs, double gamma_current) {
  if (!(gamma_current >= 0.0)) {
    std::ostringstream msg;
    msg << "trial rate Gamma = " << gamma_current << " must be >= 0";
    throw DomainError(msg.str());
  }
  const Parameters& p = inputs.params;
  const double a = clamp_population(inputs.a);
  const double g = p.gamma;
  const double c = p.coop;
  const double rho = p.rho_size;
  const double det = inputs.delta_probe;

  RateEvaluation out;
  auto& im = out.intermediates;
  im.gamma_f = 0.5 * g + gamma_current;
  const double gf2 = im.gamma_f * im.gamma_f;
  const double lorentz = gf2 / (gf2 + det * det);
  const double inversion = 2.0 * a - 1.0;
  im.zeta0 = 0.5 * c * rho * (g / im.gamma_f) * inversion;
  im.zeta = im.zeta0 * lorentz;
  im.rho_tilde = p.size_detuning ? rho - (det / im.gamma_f) * im.zeta : rho;
  const double weight = g * im.gamma_f / (gf2 + det * det);

  // a/(2a-1) (e^{2 zeta} - 1) written as a (C rho gamma / Gamma_f) lorentz Phi(2 zeta)
  const double z = 2.0 * im.zeta;
  double phi;
  if (std::abs(inversion) < p.series_epsilon || std::abs(z) < p.series_epsilon) {
    phi = 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  } else {
    phi = std::expm1(z) / z;
  }
  if (!std::isfinite(phi)) {
    std::ostringstream msg;
    msg << "exp(2 zeta) overflowed at zeta = " << im.zeta;
    throw SaturationError(msg.str(), im.zeta);
  }
  const double single = g * a * (c * rho * g / im.gamma_f) * lorentz * phi;

  im.geom = geometric_factor(im.zeta, im.rho_tilde);
  const double cross = inputs.x != 0.0 ? 2.0 * g * c * c * std::pow(rho, 4) * weight * inputs.x * im.geom : 0.0;
  const double local = a != 0.0 ? 3.0 * g * c * rho * weight * a * im.geom : 0.0;

  out.gamma_next = single + cross;
  out.gammabar = local + cross;
  if (!std::isfinite(out.gamma_next) || !std::isfinite(out.gammabar)) {
    std::ostringstream msg;
    msg << "rate evaluation overflowed at zeta = " << im.zeta << " (geometric factor " << im.geom << ")";
    throw SaturationError(msg.str(), im.zeta);
  }
  return out;
}

namespace {

class GapFunction {
 public:
  GapFunction(double a, double x, double delta, const Parameters& params)
      : inputs_{a, x, delta, params} {}

  // rhs(Gamma) - Gamma, +inf when the right-hand side saturates.
  double operator()(double gamma_trial) {
    ++evaluations_;
    try {
      const RateEvaluation ev = rate_rhs(inputs_, gamma_trial);
      return ev.gamma_next - gamma_trial;
    } catch (const SaturationError&) {
      return kInf;
    }
  }

  int evaluations() const { return evaluations_; }
  const RateInputs& inputs() const { return inputs_; }

 private:
  RateInputs inputs_;
  int evaluations_ = 0;
};

struct Bracket {
  double lo, hi, glo, ghi;
};

// Root of g on [lo, hi] with g(lo) > 0 > g(hi): geometric bisection while the
// bracket spans decades, then Illinois false position.
double refine(GapFunction& gap, Bracket b, double tol, double gamma) {
  auto accepted = [&](double x, double gx) { return std::abs(gx) <= tol * std::max(x, gamma); };
  if (accepted(b.lo, b.glo)) return b.lo;
  if (accepted(b.hi, b.ghi)) return b.hi;

  int stale_side = 0;
  for (int it = 0; it < kMaxRefine; ++it) {
    double m;
    const bool wide = b.hi > 4.0 * std::max(b.lo, gamma);
    if (!std::isfinite(b.glo) || wide) {
      m = b.lo > 0.0 ? std::sqrt(b.lo * b.hi) : std::sqrt(1e-3 * gamma * b.hi);
      if (!(m > b.lo && m < b.hi)) m = 0.5 * (b.lo + b.hi);
    } else {
      m = (b.lo * b.ghi - b.hi * b.glo) / (b.ghi - b.glo);
      if (!(m > b.lo && m < b.hi)) m = 0.5 * (b.lo + b.hi);
    }
    const double gm = gap(m);
    if (accepted(m, gm)) return m;
    if (gm > 0.0) {
      b.lo = m;
      b.glo = gm;
      if (stale_side == -1) b.ghi *= 0.5;  // Illinois: damp the retained endpoint
      stale_side = -1;
    } else {
      b.hi = m;
      b.ghi = gm;
      if (stale_side == 1) b.glo *= 0.5;
      stale_side = 1;
    }
    if (b.hi - b.lo <= 4.0 * std::numeric_limits<double>::epsilon() * b.hi) break;
  }
  // Bracket collapsed to machine resolution; the residual is limited by
  // rounding in rhs, so accept the midpoint.
  return 0.5 * (b.lo + b.hi);
}

std::string describe(double a, double x, double delta) {
  std::ostringstream msg;
  msg << "(a=" << a << ", x=" << x << ", delta=" << delta << ")";
  return msg.str();
}

RateSolution finish(GapFunction& gap, double root) {
  const RateEvaluation ev = rate_rhs(gap.inputs(), root);
  return {root, ev.gammabar, gap.evaluations()};
}

}  // namespace

RateSolution solve_self_consistent(double a, double x, double delta, const Parameters& params,
                                   std::optional<double> warm_start) {
  params.validate();
  a = clamp_population(a);
  const double g = params.gamma;
  const double tol = params.fixed_point_tol;
  const double ceiling = kGammaCeiling * g;
  GapFunction gap(a, x, delta, params);
  auto accepted = [&](double v, double gv) { return std::abs(gv) <= tol * std::max(v, g); };

  if (warm_start && std::isfinite(*warm_start) && *warm_start >= 0.0) {
    const double w = std::min(*warm_start, ceiling);
    const double gw = gap(w);
    if (accepted(w, gw)) return finish(gap, w);
    double step = 1e-3 * std::max(w, g);
    bool bracketed = false;
    Bracket b{};
    if (gw > 0.0) {
      b.lo = w;
      b.glo = gw;
      for (int k = 0; k < 60 && w + step <= ceiling; ++k, step *= 4.0) {
        const double hi = w + step;
        const double gh = gap(hi);
        if (gh <= 0.0) {
          b.hi = hi;
          b.ghi = gh;
          bracketed = true;
          break;
        }
        b.lo = hi;
        b.glo = gh;
      }
    } else {
      b.hi = w;
      b.ghi = gw;
      for (int k = 0; k < 60; ++k, step *= 4.0) {
        const double lo = std::max(0.0, w - step);
        const double gl = gap(lo);
        if (gl >= 0.0) {
          b.lo = lo;
          b.glo = gl;
          bracketed = true;
          break;
        }
        b.hi = lo;
        b.ghi = gl;
        if (lo == 0.0) break;
      }
    }
    if (bracketed) return finish(gap, refine(gap, b, tol, g));
    // fall through to the cold solve, which reports the failure precisely
  }

  const double g0 = gap(0.0);
  if (g0 < 0.0) {
    throw NoRootError("rate right-hand side is negative at Gamma = 0 for " + describe(a, x, delta));
  }
  if (accepted(0.0, g0)) return finish(gap, 0.0);

  const double upper = std::min(g0, ceiling);  // g0 = rhs(0) here
  std::vector<double> nodes;
  nodes.reserve(kScanPoints + 1);
  nodes.push_back(0.0);
  const double log_lo = std::log(upper * 1e-12);
  const double log_hi = std::log(upper);
  for (int i = 0; i < kScanPoints; ++i) {
    nodes.push_back(std::exp(log_lo + (log_hi - log_lo) * i / (kScanPoints - 1)));
  }
  nodes.back() = upper;

  std::vector<double> values;
  values.reserve(nodes.size());
  for (double node : nodes) values.push_back(node == 0.0 ? g0 : gap(node));
  // When the correlation term grows with Gamma the root can lie above rhs(0).
  while (values.back() > 0.0 && nodes.back() < ceiling) {
    nodes.push_back(std::min(4.0 * nodes.back(), ceiling));
    values.push_back(gap(nodes.back()));
  }

  std::vector<std::pair<double, double>> brackets;
  std::vector<Bracket> found;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double gl = values[i];
    const double gr = values[i + 1];
    if (gl > 0.0 && gr <= 0.0) {
      brackets.emplace_back(nodes[i], nodes[i + 1]);
      found.push_back({nodes[i], nodes[i + 1], gl, gr});
    } else if (gl <= 0.0 && gr > 0.0) {
      brackets.emplace_back(nodes[i], nodes[i + 1]);
    }
  }
  if (brackets.empty()) {
    std::ostringstream msg;
    msg << "no self-consistent rate on [0, " << nodes.back() << "] for " << describe(a, x, delta);
    throw NoRootError(msg.str());
  }
  if (brackets.size() > 1) {
    std::ostringstream msg;
    msg << brackets.size() << " candidate self-consistent rates for " << describe(a, x, delta) << ":";
    for (const auto& [lo, hi] : brackets) msg << " [" << lo << ", " << hi << "]";
    throw AmbiguousRootError(msg.str(), brackets);
  }
  if (found.empty()) {
    throw NoRootError("rate gap changes sign upward only for " + describe(a, x, delta));
  }
  return finish(gap, refine(gap, found.front(), tol, g));
}

SourceFunctions source_functions(double a, double x, double gamma_rate, double delta_probe, double delta,
                                 double gamma_vac) {
  if (!(gamma_rate >= 0.0)) throw DomainError("source_functions: Gamma must be >= 0");
  const double gf = 0.5 * gamma_vac + gamma_rate;
  const double det = delta_probe - delta;
  const double denom = gf * gf + det * det;
  return {2.0 * a * gf / denom, 2.0 * x * gf / denom, (1.0 - 2.0 * a) / std::complex<double>(gf, det)};
}

std::complex<double> kernel_wave_vector(std::complex<double> p1ret, const Parameters& params) {
  using namespace std::complex_literals;
  return 1.0 + 1i * (0.5 * params.coop * params.gamma) * p1ret;
}

std::complex<double> retarded_kernel(double r, std::complex<double> p1ret, double scale, const Parameters& params) {
  using namespace std::complex_literals;
  if (!(r > 0.0)) throw DomainError("retarded_kernel: r must be > 0");
  const std::complex<double> q0 = kernel_wave_vector(p1ret, params);
  return -1i * scale * std::exp(1i * q0 * r) / r;
}

double cooperativity_from_density(double number_density, double wavelength) {
  if (!(number_density >= 0.0) || !(wavelength > 0.0)) {
    throw DomainError("cooperativity_from_density: need density >= 0 and wavelength > 0");
  }
  return number_density * wavelength * wavelength * wavelength / (4.0 * std::numbers::pi * std::numbers::pi);
}

}  // namespace superrad
