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

#include "rhs/obe.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace rhs::obe {

namespace {

constexpr Complex kI{0.0, 1.0};

// Indices of the diagonal elements in the row-major vectorisation.
constexpr int kDiagSlots[3] = {0, 4, 8};

Matrix3c hermitian_part(const Matrix3c& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace

Vector9c vec(const Matrix3c& m) {
  Vector9c v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(3 * i + j) = m(i, j);
  return v;
}

Matrix3c unvec(const Vector9c& v) {
  Matrix3c m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = v(3 * i + j);
  return m;
}

Matrix9c kron(const Matrix3c& a, const Matrix3c& b) {
  Matrix9c out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return out;
}

DensityMatrix DensityMatrix::from_matrix(const Matrix3c& m) {
  DensityMatrix rho(m);
  std::ostringstream issues;
  if (!m.allFinite()) issues << " non-finite entries;";
  if (rho.hermiticity_error() > kHermTol) issues << " not hermitian;";
  if (rho.trace_error() > kTraceTol) issues << " trace differs from one;";
  if (rho.hermiticity_error() <= kHermTol && rho.min_eigenvalue() < kEigenFloor)
    issues << " negative eigenvalue;";
  const std::string text = issues.str();
  if (!text.empty())
    throw std::invalid_argument("density matrix invalid:" + text);
  return rho;
}

DensityMatrix DensityMatrix::ground_state() {
  Matrix3c m = Matrix3c::Zero();
  m(kG, kG) = 1.0;
  return DensityMatrix(m);
}

double DensityMatrix::trace_error() const {
  return std::abs(m_.trace() - Complex{1.0, 0.0});
}

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix3c> solver;
  solver.computeDirect(hermitian_part(m_));
  return solver.eigenvalues().minCoeff();
}

double Liouvillian::trace_residual() const {
  // Trace row: sum of the rows holding the population derivatives.
  double worst = 0.0;
  for (int col = 0; col < 9; ++col) {
    Complex sum{0.0, 0.0};
    for (int slot : kDiagSlots) sum += matrix(slot, col);
    worst = std::max(worst, std::abs(sum));
  }
  const double scale = matrix.cwiseAbs().maxCoeff();
  return worst / std::max(scale, 1.0);
}

Matrix3c build_hamiltonian(Complex rabi_probe, Complex rabi_coupling,
                           double detuning_probe, double detuning_two_photon) {
  Matrix3c h = Matrix3c::Zero();
  h(kE, kG) = -0.5 * rabi_probe;
  h(kG, kE) = -0.5 * std::conj(rabi_probe);
  h(kR, kE) = -0.5 * rabi_coupling;
  h(kE, kR) = -0.5 * std::conj(rabi_coupling);
  h(kE, kE) = -detuning_probe;
  h(kR, kR) = -detuning_two_photon;
  return h;
}

Matrix3c build_hamiltonian(const atomsys::ValidatedSystem& sys, double velocity,
                           double delta_p, double delta_c) {
  const double shifted_probe = delta_p - sys.probe().wavevector * velocity;
  const double shifted_two_photon =
      (delta_p + delta_c) + sys.delta_k() * velocity;
  return build_hamiltonian(Complex{sys.probe().rabi, 0.0},
                           Complex{sys.coupling().rabi, 0.0}, shifted_probe,
                           shifted_two_photon);
}

Liouvillian build_liouvillian(const Matrix3c& hamiltonian,
                              const atomsys::DecoherenceRates& rates,
                              double velocity) {
  const Matrix3c id = Matrix3c::Identity();
  Matrix9c l = -kI * (kron(hamiltonian, id) - kron(id, hamiltonian.transpose()));

  auto add_dissipator = [&l, &id](const Matrix3c& jump) {
    const Matrix3c jj = jump.adjoint() * jump;
    l += kron(jump, jump.conjugate());
    l -= 0.5 * kron(jj, id);
    l -= 0.5 * kron(id, jj.transpose());
  };

  Matrix3c jump = Matrix3c::Zero();
  if (rates.gamma_eg > 0.0) {
    jump.setZero();
    jump(kG, kE) = std::sqrt(rates.gamma_eg);
    add_dissipator(jump);
  }
  if (rates.gamma_re > 0.0) {
    jump.setZero();
    jump(kE, kR) = std::sqrt(rates.gamma_re);
    add_dissipator(jump);
  }
  if (rates.gamma_rg > 0.0) {
    jump.setZero();
    jump(kG, kR) = std::sqrt(rates.gamma_rg);
    add_dissipator(jump);
  }
  if (rates.gamma_rel > 0.0) {
    jump.setZero();
    jump(kR, kR) = std::sqrt(2.0 * rates.gamma_rel);
    add_dissipator(jump);
  }

  return Liouvillian{l, rates, velocity};
}

DensityMatrix steady_state(const Liouvillian& l) {
  Matrix9c a = l.matrix;
  for (int col = 0; col < 9; ++col) a(0, col) = Complex{0.0, 0.0};
  for (int slot : kDiagSlots) a(0, slot) = Complex{1.0, 0.0};
  Vector9c b = Vector9c::Zero();
  b(0) = Complex{1.0, 0.0};

  const Vector9c x = a.partialPivLu().solve(b);
  if (!x.allFinite())
    throw SingularSteadyStateError("steady_state: singular kernel");

  const double scale =
      l.matrix.cwiseAbs().rowwise().sum().maxCoeff();
  const double residual = (l.matrix * x).norm();
  if (!(residual < 1e-10 * std::max(scale, 1.0)))
    throw SingularSteadyStateError(
        "steady_state: no unique steady state (residual " +
        std::to_string(residual) + ")");

  Matrix3c rho = hermitian_part(unvec(x));
  rho /= rho.trace().real();
  try {
    return DensityMatrix::from_matrix(rho);
  } catch (const std::invalid_argument& err) {
    // A proper generator with a one-dimensional kernel yields a physical
    // state here; an unphysical kernel element means the kernel is
    // degenerate and the LU residual alone could not see it.
    throw SingularSteadyStateError(
        std::string("steady_state: no unique steady state (") + err.what() +
        ")");
  }
}

DensityMatrix time_evolve(const DensityMatrix& rho0, const Liouvillian& l,
                          double t) {
  if (!(t >= 0.0)) throw std::domain_error("time_evolve: t must be >= 0");
  const Matrix9c propagator = (l.matrix * t).exp();
  Matrix3c rho = hermitian_part(unvec(propagator * vec(rho0.matrix())));
  rho /= rho.trace().real();
  return DensityMatrix::from_matrix(rho);
}

Complex two_level_coherence(double rabi, double detuning, double gamma) {
  const double denom =
      detuning * detuning + 0.25 * gamma * gamma + 0.5 * rabi * rabi;
  return 0.5 * rabi * Complex{-detuning, 0.5 * gamma} / denom;
}

double two_level_population(double rabi, double detuning, double gamma) {
  const double denom =
      detuning * detuning + 0.25 * gamma * gamma + 0.5 * rabi * rabi;
  return 0.25 * rabi * rabi / denom;
}

}  // namespace rhs::obe
