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

#include "rhs/atomsys.hpp"

namespace rhs::efftl {

// Adiabatic elimination of the intermediate level: an effective two-level
// system between ground and Rydberg states, valid far off one-photon
// resonance.
struct EffectiveTL {
  double omega_eff = 0.0;   // rad/s, two-photon Rabi frequency
  double delta_eff = 0.0;   // rad/s, twice the shifted two-photon detuning
  double rho_rr = 0.0;      // steady Rydberg population, in [0, 1/2]
  double re_rho_rg = 0.0;   // real part of the Rydberg-ground coherence
};

// omega_eff = op oc / (dp - dc),
// delta_eff = 2 (dp + dc) + 2 delta_k v + op^2 / (dp - dc).
// Throws std::domain_error when dp == dc (elimination singular).
EffectiveTL effective_params(double omega_p, double omega_c, double delta_p,
                             double delta_c, double delta_k, double velocity,
                             double gamma_rg);
EffectiveTL effective_params(const atomsys::ValidatedSystem& sys,
                             double delta_c, double velocity);

double rho_rr_analytic(double omega_eff, double delta_eff, double gamma_rg);
double re_rho_rg_analytic(double omega_eff, double delta_eff, double gamma_rg);

// Dispersion of the two-photon component of the probe coherence.
// Invalid (flagged) when |delta_p - k_p v| is not at least ten times both
// the probe Rabi frequency and the intermediate linewidth; throws
// std::domain_error on an exactly vanishing denominator.
struct Eq2Result {
  double value = 0.0;
  bool valid = true;
};
Eq2Result dispersion_eq2(double omega_p, double omega_c, double delta_p,
                         double k_p, double velocity, const EffectiveTL& eff,
                         double gamma_eg);

// Closed-form peak susceptibility of the Doppler-averaged two-photon line.
// The Rydberg population may be evaluated at the supplied detuning or forced
// to the line center (delta_eff = 0); both conventions are exposed because
// the width of the averaged line makes the distinction visible.
enum class PeakEval { AtGivenDetuning, AtLineCenter };

struct PeakChi {
  double re = 0.0;
  double im = 0.0;
  double im_re_ratio = 0.0;  // 2 gamma_rg delta_p / omega_p^2
  EffectiveTL eff;
};
PeakChi peak_chi_approx(const atomsys::ValidatedSystem& sys, double delta_c,
                        PeakEval eval = PeakEval::AtGivenDetuning);

// Coupling detuning that zeroes delta_eff for the v = 0 class:
// dc = -sqrt(dp^2 + op^2 / 2).
double light_shifted_resonance(double omega_p, double delta_p);

double im_re_ratio(double gamma_rg, double delta_p, double omega_p);

}  // namespace rhs::efftl
