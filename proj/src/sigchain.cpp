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

#include "rhs/sigchain.hpp"

#include <cmath>
#include <stdexcept>

#include "rhs/constants.hpp"

namespace rhs::sigchain {

double rabi_profile(double peak_rabi, double z, double rayleigh_range) {
  if (!(rayleigh_range > 0.0))
    throw std::domain_error("rabi_profile: Rayleigh range must be > 0");
  const double u = z / rayleigh_range;
  return peak_rabi / std::sqrt(1.0 + u * u);
}

double phase_uniform(double chi_real, double k_p, double length) {
  if (!(length > 0.0))
    throw std::domain_error("phase_uniform: cell length must be > 0");
  return 0.5 * k_p * length * chi_real;
}

double phase_profile_integrated(
    const atomsys::ValidatedSystem& sys,
    const std::function<double(double, double)>& chi_at, int panels) {
  if (panels < 64)
    throw std::domain_error("phase_profile_integrated: need at least 64 panels");
  const double z_probe = sys.probe().rayleigh_range;
  const double z_coupling = sys.coupling().rayleigh_range;
  if (!(z_probe > 0.0) || !(z_coupling > 0.0))
    throw std::domain_error(
        "phase_profile_integrated: both Rayleigh ranges must be > 0");

  const double length = sys.cell_length();
  const double h = length / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double z = -0.5 * length + (i + 0.5) * h;
    const double omega_p = rabi_profile(sys.probe().rabi, z, z_probe);
    const double omega_c = rabi_profile(sys.coupling().rabi, z, z_coupling);
    sum += chi_at(omega_p, omega_c);
  }
  return 0.5 * sys.probe().wavevector * h * sum;
}

double lockin_output(double phase, const MeasurementChain& chain) {
  return chain.gain * chain.mixer_sensitivity * phase;
}

double lockin_invert(double volts, const MeasurementChain& chain) {
  const double scale = chain.gain * chain.mixer_sensitivity;
  if (scale == 0.0)
    throw std::domain_error("lockin_invert: gain times sensitivity is zero");
  return volts / scale;
}

double invert_population(double phase, const atomsys::ValidatedSystem& sys,
                         double omega_eff) {
  if (!(omega_eff > 0.0))
    throw std::domain_error(
        "invert_population: effective Rabi frequency must be > 0");
  if (phase < 0.0)
    throw std::domain_error("invert_population: phase must be >= 0");
  const double delta_p = sys.probe().detuning;
  if (delta_p == 0.0)
    throw std::domain_error("invert_population: probe detuning must be nonzero");
  const double mu = sys.species().dipole_probe;
  const double coupling_term =
      2.0 * kEpsilon0 * kHbar * delta_p / (sys.density() * mu * mu);
  const double width_term =
      std::abs(sys.delta_k()) * sys.thermal_speed() / (std::sqrt(kPi) * omega_eff);
  const double cell_term = sys.species().wavelength_probe / sys.cell_length();
  return coupling_term * width_term * cell_term * phase;
}

}  // namespace rhs::sigchain
