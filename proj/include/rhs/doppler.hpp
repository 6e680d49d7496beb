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

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rhs/atomsys.hpp"
#include "rhs/parallel.hpp"

namespace rhs::doppler {

using Complex = std::complex<double>;

struct QuadratureOptions {
  double rel_tol = 1e-6;
  int max_panels = 4096;
  // Initial panels are split until none is wider than this many thermal
  // speeds; doubles as the node-floor knob.
  double max_panel_width = 1.5;
  ExecPolicy policy = ExecPolicy::Parallel;
};

struct QuadratureDiagnostics {
  long evaluations = 0;
  int panels = 0;
  double rel_error = 0.0;  // final error estimate over the L1 mass
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureDiagnostics diag)
      : std::runtime_error(what), diagnostics(diag) {}
  QuadratureDiagnostics diagnostics;
};

struct AverageResult {
  Complex value{0.0, 0.0};
  QuadratureDiagnostics diag;
};

// Gaussian-weighted velocity average of f over [-6, 6] thermal speeds with
// a deterministic adaptive Gauss-Kronrod rule. Subdivision decisions depend
// only on panel estimates, so serial and parallel evaluation agree bit for
// bit. Extra breakpoints force panel edges at known narrow features.
AverageResult thermal_average(const std::function<Complex(double)>& f,
                              double v_p, const QuadratureOptions& opt = {},
                              std::span<const double> breakpoints = {});

enum class TwoLevelBranch { ClosedForm, FullSolve };

// Two-photon part of the probe coherence for one velocity class: the full
// three-level steady state minus the coupling-off two-level value.
Complex rho_eg_3l(const atomsys::ValidatedSystem& sys, double velocity,
                  double delta_c,
                  TwoLevelBranch branch = TwoLevelBranch::ClosedForm);

struct Susceptibility {
  Complex value{0.0, 0.0};
  double delta_p = 0.0;
  double delta_c = 0.0;
  double omega_p = 0.0;
  double omega_c = 0.0;
  double density = 0.0;
  double temperature = 0.0;
  QuadratureDiagnostics diag;
};

// 2 N |mu|^2 / (eps0 hbar omega_p); multiplies the averaged coherence.
// Density enters only here, so the susceptibility is exactly linear in N.
double chi_prefactor(const atomsys::ValidatedSystem& sys);

// Panel edges seeded at the two-photon resonant velocity and at the
// intermediate one-photon resonance, each with a window set by the
// relevant linewidth over the wavevector scale.
std::vector<double> resonance_breakpoints(const atomsys::ValidatedSystem& sys,
                                          double delta_c);

// Doppler-averaged two-photon susceptibility at the given coupling detuning.
Susceptibility chi_3l(const atomsys::ValidatedSystem& sys, double delta_c,
                      const QuadratureOptions& opt = {},
                      TwoLevelBranch branch = TwoLevelBranch::ClosedForm);

}  // namespace rhs::doppler
