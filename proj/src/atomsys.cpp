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

#include "rhs/atomsys.hpp"

#include <cmath>
#include <sstream>

#include "rhs/constants.hpp"

namespace rhs::atomsys {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << "invalid system configuration:";
  for (const auto& issue : issues) os << "\n  " << issue;
  return os.str();
}

// Alcock-type saturated vapor pressure correlations for rubidium, torr.
// The solid branch is rescaled by a constant so both branches meet at the
// melting point; the raw fits disagree there by ~3.5%, within their quoted
// accuracy.
constexpr double kMeltingPoint = 312.45;  // K

double log10_pressure_liquid(double t) { return 2.881 + 4.312 - 4040.0 / t; }
double log10_pressure_solid(double t) { return 2.881 + 4.857 - 4215.0 / t; }

double pressure_pa(double t) {
  const double branch_match =
      log10_pressure_liquid(kMeltingPoint) - log10_pressure_solid(kMeltingPoint);
  const double log10_torr = (t < kMeltingPoint)
                                ? log10_pressure_solid(t) + branch_match
                                : log10_pressure_liquid(t);
  return std::pow(10.0, log10_torr) * kPascalPerTorr;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

double vapor_density(double temperature, const AtomSpecies& species) {
  if (!(temperature >= 250.0 && temperature <= 500.0))
    throw std::domain_error("vapor_density: temperature outside 250..500 K");
  if (!(species.isotope_abundance > 0.0 && species.isotope_abundance <= 1.0))
    throw std::domain_error("vapor_density: isotope abundance outside (0, 1]");
  return species.isotope_abundance * pressure_pa(temperature) /
         (kBoltzmann * temperature);
}

double thermal_speed(double temperature, double mass) {
  if (!(temperature > 0.0)) throw std::domain_error("thermal_speed: T <= 0");
  if (!(mass > 0.0)) throw std::domain_error("thermal_speed: mass <= 0");
  return std::sqrt(kBoltzmann * temperature / mass);
}

ValidatedSystem validate(const SystemConfig& config) {
  std::vector<std::string> issues;
  auto require = [&issues](bool ok, const std::string& text) {
    if (!ok) issues.push_back(text);
  };

  const AtomSpecies& sp = config.species;
  require(sp.mass > 0.0, "species.mass: must be > 0");
  require(sp.wavelength_probe > 0.0, "species.wavelength_probe: must be > 0");
  require(sp.wavelength_coupling > 0.0,
          "species.wavelength_coupling: must be > 0");
  require(sp.dipole_probe > 0.0, "species.dipole_probe: must be > 0");
  require(sp.isotope_abundance > 0.0 && sp.isotope_abundance <= 1.0,
          "species.isotope_abundance: must be in (0, 1]");

  auto check_field = [&require](const LaserField& f, const std::string& name) {
    require(f.rabi >= 0.0, name + ".rabi: must be >= 0");
    require(std::isfinite(f.detuning), name + ".detuning: must be finite");
    require(std::isfinite(f.wavevector), name + ".wavevector: must be finite");
    require(f.waist > 0.0, name + ".waist: must be > 0");
    require(f.rayleigh_range > 0.0, name + ".rayleigh_range: must be > 0");
  };
  check_field(config.probe, "probe");
  check_field(config.coupling, "coupling");

  const DecoherenceRates& rt = config.rates;
  require(rt.gamma_eg >= 0.0, "rates.gamma_eg: must be >= 0");
  require(rt.gamma_re >= 0.0, "rates.gamma_re: must be >= 0");
  require(rt.gamma_rg >= 0.0, "rates.gamma_rg: must be >= 0");
  require(rt.gamma_rel >= 0.0, "rates.gamma_rel: must be >= 0");

  require(config.density > 0.0, "cell.density: must be > 0");
  require(config.temperature > 0.0, "cell.temperature: must be > 0");
  require(config.cell_length > 0.0, "cell.length: must be > 0");

  if (!issues.empty()) throw ValidationError(std::move(issues));

  SystemConfig out = config;
  const double v_p = thermal_speed(config.temperature, sp.mass);
  if (std::isnan(out.thermal_speed)) {
    out.thermal_speed = v_p;
  } else if (std::abs(out.thermal_speed - v_p) > 1e-12 * v_p) {
    issues.push_back("thermal_speed: inconsistent with temperature and mass");
  }

  const double dk = config.coupling.wavevector - config.probe.wavevector;
  if (std::isnan(out.delta_k)) {
    out.delta_k = dk;
  } else if (out.delta_k != dk) {
    issues.push_back("delta_k: must equal coupling.wavevector - probe.wavevector");
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  return ValidatedSystem(out);
}

const ValidatedSystem& validate(const ValidatedSystem& system) { return system; }

}  // namespace rhs::atomsys
