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

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rhs::atomsys {

constexpr double kUnsetDouble = std::numeric_limits<double>::quiet_NaN();

struct AtomSpecies {
  double mass = 0.0;                // kg
  double wavelength_probe = 0.0;    // m, lower transition
  double wavelength_coupling = 0.0; // m, upper transition
  double dipole_probe = 0.0;        // C m, lower-transition dipole element
  double isotope_abundance = 1.0;   // fraction of the vapor in this isotope
};

struct LaserField {
  double rabi = 0.0;           // rad/s, >= 0; only magnitudes enter observables
  double detuning = 0.0;       // rad/s
  double wavevector = 0.0;     // rad/m, signed projection on the probe axis
  double waist = 0.0;          // m
  double rayleigh_range = 0.0; // m
};

struct DecoherenceRates {
  double gamma_eg = 0.0;  // rad/s, intermediate -> ground decay
  double gamma_re = 0.0;  // rad/s, Rydberg -> intermediate decay
  double gamma_rg = 0.0;  // rad/s, Rydberg -> ground effective decay
  double gamma_rel = 0.0; // rad/s, extra dephasing of Rydberg coherences
};

struct SystemConfig {
  AtomSpecies species;
  LaserField probe;
  LaserField coupling;
  DecoherenceRates rates;
  double density = 0.0;      // m^-3
  double temperature = 0.0;  // K
  double cell_length = 0.0;  // m
  // Derived quantities; NaN means "fill during validation".
  double thermal_speed = kUnsetDouble;  // m/s, sqrt(kB T / m)
  double delta_k = kUnsetDouble;        // rad/m, coupling k minus probe k
};

// Carries every violated constraint, one human-readable line per field.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Immutable after construction, safe to share across threads.
class ValidatedSystem {
 public:
  const AtomSpecies& species() const { return cfg_.species; }
  const LaserField& probe() const { return cfg_.probe; }
  const LaserField& coupling() const { return cfg_.coupling; }
  const DecoherenceRates& rates() const { return cfg_.rates; }
  double density() const { return cfg_.density; }
  double temperature() const { return cfg_.temperature; }
  double cell_length() const { return cfg_.cell_length; }
  double thermal_speed() const { return cfg_.thermal_speed; }
  double delta_k() const { return cfg_.delta_k; }
  double two_photon_detuning() const {
    return cfg_.probe.detuning + cfg_.coupling.detuning;
  }
  const SystemConfig& config() const { return cfg_; }

 private:
  friend ValidatedSystem validate(const SystemConfig& config);
  explicit ValidatedSystem(SystemConfig cfg) : cfg_(cfg) {}
  SystemConfig cfg_;
};

// Saturated-vapor number density of the selected isotope, m^-3.
// Valid for 250 K <= T <= 500 K; throws std::domain_error outside.
double vapor_density(double temperature, const AtomSpecies& species);

// 1-D thermal speed sqrt(kB T / m), the Gaussian width of the axial
// velocity distribution. Throws std::domain_error for non-positive input.
double thermal_speed(double temperature, double mass);

// Checks every field constraint, fills the derived fields, and returns an
// immutable system. Collects all violations into one ValidationError.
ValidatedSystem validate(const SystemConfig& config);

// Validating an already validated system is the identity.
const ValidatedSystem& validate(const ValidatedSystem& system);

}  // namespace rhs::atomsys
