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

#include "rhs/config_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "rhs/constants.hpp"

namespace rhs::config_io {

namespace {

namespace pt = boost::property_tree;

std::string require_string(const pt::ptree& tree, const std::string& key) {
  const auto value = tree.get_optional<std::string>(key);
  if (!value) throw ConfigError("missing key: " + key);
  return *value;
}

double parse_double(const std::string& text, const std::string& key) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  while (end != nullptr && (*end == ' ' || *end == '\t')) ++end;
  if (end == begin || end == nullptr || *end != '\0' || !std::isfinite(value))
    throw ConfigError("invalid number for " + key + ": '" + text + "'");
  return value;
}

double require_double(const pt::ptree& tree, const std::string& key) {
  return parse_double(require_string(tree, key), key);
}

double require_mhz(const pt::ptree& tree, const std::string& key) {
  return mhz_to_rad(require_double(tree, key));
}

double signed_wavevector(const pt::ptree& tree, const std::string& key,
                         double wavelength) {
  const double direction = require_double(tree, key);
  if (direction != 1.0 && direction != -1.0)
    throw ConfigError(key + ": must be +1 or -1");
  if (!(wavelength > 0.0))
    throw ConfigError(key + ": wavelength must be > 0 to set a wavevector");
  return direction * kTwoPi / wavelength;
}

std::string format_value(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

LoadedConfig load_config(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }

  LoadedConfig cfg;
  atomsys::SystemConfig& sys = cfg.system;

  sys.species.mass = require_double(tree, "species.mass_u") * kAtomicMassUnit;
  sys.species.wavelength_probe =
      require_double(tree, "species.wavelength_probe_m");
  sys.species.wavelength_coupling =
      require_double(tree, "species.wavelength_coupling_m");
  sys.species.dipole_probe = require_double(tree, "species.dipole_Cm");
  sys.species.isotope_abundance =
      require_double(tree, "species.isotope_abundance");

  sys.probe.rabi = require_mhz(tree, "probe.rabi_mhz");
  sys.probe.detuning = require_mhz(tree, "probe.detuning_mhz");
  sys.probe.wavevector = signed_wavevector(tree, "probe.direction",
                                           sys.species.wavelength_probe);
  sys.probe.waist = require_double(tree, "probe.waist_m");
  sys.probe.rayleigh_range = require_double(tree, "probe.rayleigh_range_m");

  sys.coupling.rabi = require_mhz(tree, "coupling.rabi_mhz");
  sys.coupling.detuning = require_mhz(tree, "coupling.detuning_mhz");
  sys.coupling.wavevector = signed_wavevector(
      tree, "coupling.direction", sys.species.wavelength_coupling);
  sys.coupling.waist = require_double(tree, "coupling.waist_m");
  sys.coupling.rayleigh_range =
      require_double(tree, "coupling.rayleigh_range_m");

  sys.rates.gamma_eg = require_mhz(tree, "rates.gamma_eg_mhz");
  sys.rates.gamma_re = require_mhz(tree, "rates.gamma_re_mhz");
  sys.rates.gamma_rg = require_mhz(tree, "rates.gamma_rg_mhz");
  sys.rates.gamma_rel = require_mhz(tree, "rates.gamma_rel_mhz");

  sys.temperature = require_double(tree, "cell.temperature_K");
  sys.cell_length = require_double(tree, "cell.length_m");

  const std::string density = require_string(tree, "cell.density_m3");
  if (density == "auto") {
    cfg.density_auto = true;
    try {
      sys.density = atomsys::vapor_density(sys.temperature, sys.species);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("cell.density_m3 auto: ") + e.what());
    }
  } else {
    sys.density = parse_double(density, "cell.density_m3");
  }

  cfg.chain.gain = tree.get<double>("chain.gain", 1.0);
  cfg.chain.mixer_sensitivity =
      tree.get<double>("chain.mixer_sensitivity_V_per_rad", 1.0);
  cfg.chain.phase_noise_rms =
      tree.get<double>("chain.phase_noise_urad", 0.0) * 1e-6;
  const auto seed = tree.get_optional<std::uint64_t>("chain.seed");
  if (seed) {
    cfg.chain.rng_seed = *seed;
    cfg.chain.seeded = true;
  }
  return cfg;
}

void save_config(const LoadedConfig& cfg, const std::string& path) {
  const atomsys::SystemConfig& sys = cfg.system;
  const auto direction_of = [](double wavevector, const char* key) {
    if (wavevector > 0.0) return "1";
    if (wavevector < 0.0) return "-1";
    throw ConfigError(std::string(key) + ": zero wavevector has no direction");
  };

  pt::ptree tree;
  tree.put("species.mass_u", format_value(sys.species.mass / kAtomicMassUnit));
  tree.put("species.wavelength_probe_m",
           format_value(sys.species.wavelength_probe));
  tree.put("species.wavelength_coupling_m",
           format_value(sys.species.wavelength_coupling));
  tree.put("species.dipole_Cm", format_value(sys.species.dipole_probe));
  tree.put("species.isotope_abundance",
           format_value(sys.species.isotope_abundance));

  tree.put("probe.rabi_mhz", format_value(rad_to_mhz(sys.probe.rabi)));
  tree.put("probe.detuning_mhz", format_value(rad_to_mhz(sys.probe.detuning)));
  tree.put("probe.direction",
           direction_of(sys.probe.wavevector, "probe.direction"));
  tree.put("probe.waist_m", format_value(sys.probe.waist));
  tree.put("probe.rayleigh_range_m", format_value(sys.probe.rayleigh_range));

  tree.put("coupling.rabi_mhz", format_value(rad_to_mhz(sys.coupling.rabi)));
  tree.put("coupling.detuning_mhz",
           format_value(rad_to_mhz(sys.coupling.detuning)));
  tree.put("coupling.direction",
           direction_of(sys.coupling.wavevector, "coupling.direction"));
  tree.put("coupling.waist_m", format_value(sys.coupling.waist));
  tree.put("coupling.rayleigh_range_m",
           format_value(sys.coupling.rayleigh_range));

  tree.put("rates.gamma_eg_mhz", format_value(rad_to_mhz(sys.rates.gamma_eg)));
  tree.put("rates.gamma_re_mhz", format_value(rad_to_mhz(sys.rates.gamma_re)));
  tree.put("rates.gamma_rg_mhz", format_value(rad_to_mhz(sys.rates.gamma_rg)));
  tree.put("rates.gamma_rel_mhz",
           format_value(rad_to_mhz(sys.rates.gamma_rel)));

  tree.put("cell.temperature_K", format_value(sys.temperature));
  tree.put("cell.density_m3",
           cfg.density_auto ? std::string("auto") : format_value(sys.density));
  tree.put("cell.length_m", format_value(sys.cell_length));

  tree.put("chain.gain", format_value(cfg.chain.gain));
  tree.put("chain.mixer_sensitivity_V_per_rad",
           format_value(cfg.chain.mixer_sensitivity));
  tree.put("chain.phase_noise_urad",
           format_value(cfg.chain.phase_noise_rms * 1e6));
  if (cfg.chain.seeded) tree.put("chain.seed", cfg.chain.rng_seed);

  try {
    pt::write_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace rhs::config_io
