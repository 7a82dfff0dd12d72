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

// Conversions between the reduced variables (a, d, n, x) and the full
// two-atom density matrix, plus the derived Dicke populations and the
// entanglement witness.

#pragma once

#include "superrad/types.hpp"

#include <array>

namespace superrad {

/// Reduced variables of a density matrix:
///   a = p_aa + (p_ab + p_ba)/2,  d = p_ab - p_ba,
///   n = p_aa - p_ab - p_ba + p_bb,  x = Re rho_{ab,ba}.
/// Throws InvalidStateError if the trace differs from 1 by more than trace_tol.
ReducedState reduce(const TwoAtomDensityMatrix& rho, double trace_tol = 1e-10);

/// Populations (p_aa, p_ab, p_ba, p_bb) implied by a reduced state.
std::array<double, 4> populations(const ReducedState& s);

/// X-structured density matrix with the given reduced variables; inverse of
/// reduce() on that family. Populations may undershoot 0 or overshoot 1 by at
/// most pop_tol before UnphysicalStateError is thrown.
TwoAtomDensityMatrix reconstruct(const ReducedState& s, double pop_tol = 1e-12);

struct DickePopulations {
  double plus = 0.0;   ///< rho_{++}, |+> = (|ab> + |ba>)/sqrt 2
  double minus = 0.0;  ///< rho_{--}, |-> = (|ab> - |ba>)/sqrt 2
};

/// rho_{++/--} = (1 - n)/4 +/- x.
DickePopulations super_sub_populations(const ReducedState& s);

/// W = |rho_{ab,ba}| - sqrt(p_aa p_bb). For X-structured states a positive W
/// equals half the Wootters concurrence; W <= 0 means separable.
double entanglement_witness(const TwoAtomDensityMatrix& rho);

/// Witness evaluated straight from reduced variables (same value as
/// entanglement_witness(reconstruct(s)) but total on slightly unphysical input).
double entanglement_witness(const ReducedState& s);

}  // namespace superrad
