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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace superrad {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or argument outside the function's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Density matrix that violates trace/Hermiticity requirements.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Reduced variables that map to negative or >1 populations.
class UnphysicalStateError : public Error {
 public:
  using Error::Error;
};

/// exp(2 zeta) overflowed while evaluating the rate equation.
class SaturationError : public Error {
 public:
  SaturationError(const std::string& what, double zeta) : Error(what), zeta_(zeta) {}
  double zeta() const noexcept { return zeta_; }

 private:
  double zeta_;
};

/// g(Gamma) = rhs(Gamma) - Gamma has no sign change on the search interval.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// More than one self-consistent rate exists.
class AmbiguousRootError : public Error {
 public:
  AmbiguousRootError(const std::string& what, std::vector<std::pair<double, double>> brackets)
      : Error(what), brackets_(std::move(brackets)) {}
  const std::vector<std::pair<double, double>>& brackets() const noexcept { return brackets_; }

 private:
  std::vector<std::pair<double, double>> brackets_;
};

/// Failure inside an integration, tagged with where it happened.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double t) : Error(what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// Step size collapsed below the representable resolution of t.
class StiffnessError : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

/// The master-equation oracle produced a non-positive density matrix.
class OracleIntegrityError : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace superrad
