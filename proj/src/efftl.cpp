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

#include "rhs/efftl.hpp"

#include <cmath>
#include <stdexcept>

#include "rhs/constants.hpp"

namespace rhs::efftl {

EffectiveTL effective_params(double omega_p, double omega_c, double delta_p,
                             double delta_c, double delta_k, double velocity,
                             double gamma_rg) {
  const double intermediate = delta_p - delta_c;
  if (intermediate == 0.0)
    throw std::domain_error(
        "effective_params: probe and coupling detunings coincide");

  EffectiveTL eff;
  eff.omega_eff = omega_p * omega_c / intermediate;
  eff.delta_eff = 2.0 * (delta_p + delta_c) + 2.0 * delta_k * velocity +
                  omega_p * omega_p / intermediate;
  eff.rho_rr = rho_rr_analytic(eff.omega_eff, eff.delta_eff, gamma_rg);
  eff.re_rho_rg = re_rho_rg_analytic(eff.omega_eff, eff.delta_eff, gamma_rg);
  return eff;
}

EffectiveTL effective_params(const atomsys::ValidatedSystem& sys,
                             double delta_c, double velocity) {
  return effective_params(sys.probe().rabi, sys.coupling().rabi,
                          sys.probe().detuning, delta_c, sys.delta_k(),
                          velocity, sys.rates().gamma_rg);
}

double rho_rr_analytic(double omega_eff, double delta_eff, double gamma_rg) {
  const double denom = delta_eff * delta_eff + 2.0 * omega_eff * omega_eff +
                       gamma_rg * gamma_rg;
  if (denom == 0.0) return 0.0;
  return omega_eff * omega_eff / denom;
}

double re_rho_rg_analytic(double omega_eff, double delta_eff, double gamma_rg) {
  const double denom = delta_eff * delta_eff + 2.0 * omega_eff * omega_eff +
                       gamma_rg * gamma_rg;
  if (denom == 0.0) return 0.0;
  return omega_eff * delta_eff / denom;
}

Eq2Result dispersion_eq2(double omega_p, double omega_c, double delta_p,
                         double k_p, double velocity, const EffectiveTL& eff,
                         double gamma_eg) {
  const double denom = delta_p - k_p * velocity;
  if (denom == 0.0)
    throw std::domain_error("dispersion_eq2: probe resonant for this velocity");
  Eq2Result out;
  out.value = (omega_p * eff.rho_rr - omega_c * eff.re_rho_rg) / (2.0 * denom);
  out.valid = std::abs(denom) >= 10.0 * std::max(omega_p, gamma_eg);
  return out;
}

PeakChi peak_chi_approx(const atomsys::ValidatedSystem& sys, double delta_c,
                        PeakEval eval) {
  const double omega_p = sys.probe().rabi;
  if (!(omega_p > 0.0))
    throw std::domain_error("peak_chi_approx: probe Rabi frequency is zero");
  const double dk = std::abs(sys.delta_k());
  if (!(dk > 0.0))
    throw std::domain_error("peak_chi_approx: beams are Doppler degenerate");

  PeakChi out;
  out.eff = effective_params(sys, delta_c, 0.0);
  const double rho_rr = (eval == PeakEval::AtLineCenter)
                            ? rho_rr_analytic(out.eff.omega_eff, 0.0,
                                              sys.rates().gamma_rg)
                            : out.eff.rho_rr;

  const double dipole_term = sys.density() * sys.species().dipole_probe *
                             sys.species().dipole_probe /
                             (kEpsilon0 * kHbar);
  const double width = dk * sys.thermal_speed();
  const double sqrt_pi = std::sqrt(kPi);

  out.re = out.eff.omega_eff / (2.0 * sqrt_pi * width) * dipole_term /
           sys.probe().detuning * rho_rr;
  out.im = out.eff.omega_eff / (sqrt_pi * width) * dipole_term *
           sys.rates().gamma_rg / (omega_p * omega_p) * rho_rr;
  out.im_re_ratio =
      im_re_ratio(sys.rates().gamma_rg, sys.probe().detuning, omega_p);
  return out;
}

double light_shifted_resonance(double omega_p, double delta_p) {
  return -std::sqrt(delta_p * delta_p + 0.5 * omega_p * omega_p);
}

double im_re_ratio(double gamma_rg, double delta_p, double omega_p) {
  if (!(omega_p > 0.0)) throw std::domain_error("im_re_ratio: omega_p <= 0");
  return 2.0 * gamma_rg * delta_p / (omega_p * omega_p);
}

}  // namespace rhs::efftl
