// Copyright 2026 the rhs authors
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

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "rhs/atomsys.hpp"

namespace rhs::obe {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Matrix9c = Eigen::Matrix<Complex, 9, 9>;
using Vector9c = Eigen::Matrix<Complex, 9, 1>;

// Ladder basis {ground, intermediate, Rydberg}.
enum Level : int { kG = 0, kE = 1, kR = 2 };

// Row-major vectorisation: element (i, j) lives at slot 3 i + j, so that
// vec(A X B) = (A kron B^T) vec(X).
Vector9c vec(const Matrix3c& m);
Matrix3c unvec(const Vector9c& v);
Matrix9c kron(const Matrix3c& a, const Matrix3c& b);

class DensityMatrix {
 public:
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kHermTol = 1e-12;
  static constexpr double kEigenFloor = -1e-10;

  // Validates unit trace, hermiticity and positivity; throws
  // std::invalid_argument listing the violated constraint.
  static DensityMatrix from_matrix(const Matrix3c& m);
  static DensityMatrix ground_state();

  const Matrix3c& matrix() const { return m_; }
  double population(int level) const { return m_(level, level).real(); }
  Complex coherence(int i, int j) const { return m_(i, j); }

  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  explicit DensityMatrix(const Matrix3c& m) : m_(m) {}
  Matrix3c m_;
};

// Generator of the dissipative dynamics, rad/s, acting on vec(rho).
struct Liouvillian {
  Matrix9c matrix;
  atomsys::DecoherenceRates rates;
  double velocity = 0.0;

  // Residual of d(tr rho)/dt = 0, scaled by the matrix norm.
  double trace_residual() const;
};

class SingularSteadyStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rotating-frame Hamiltonian over hbar, rad/s. The diagonal carries the
// Doppler-shifted one- and two-photon detunings; couplings sit at
// -rabi/2 on the off-diagonals.
Matrix3c build_hamiltonian(Complex rabi_probe, Complex rabi_coupling,
                           double detuning_probe, double detuning_two_photon);

// Same, with the Doppler shifts (delta_p - k_p v) and (delta_2 + delta_k v)
// computed from the system geometry; delta_c overrides the configured
// coupling detuning so scans can sweep it.
Matrix3c build_hamiltonian(const atomsys::ValidatedSystem& sys, double velocity,
                           double delta_p, double delta_c);

// L = -i (H kron I - I kron H^T) plus the dissipators for the jumps
// e->g, r->e, r->g and pure Rydberg dephasing at rate 2*gamma_rel.
Liouvillian build_liouvillian(const Matrix3c& hamiltonian,
                              const atomsys::DecoherenceRates& rates,
                              double velocity = 0.0);

// Unique kernel element with unit trace, via trace-row replacement and
// dense LU. Throws SingularSteadyStateError when the kernel is degenerate.
DensityMatrix steady_state(const Liouvillian& l);

// exp(L t) applied to vec(rho0); t >= 0.
DensityMatrix time_evolve(const DensityMatrix& rho0, const Liouvillian& l,
                          double t);

// Closed-form steady state of the driven ground/intermediate pair, used as
// the fast branch when the coupling beam is off.
Complex two_level_coherence(double rabi, double detuning, double gamma);
double two_level_population(double rabi, double detuning, double gamma);

}  // namespace rhs::obe
