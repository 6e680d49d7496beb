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

#include "rhs/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rhs/config_io.hpp"
#include "rhs/constants.hpp"
#include "rhs/doppler.hpp"
#include "rhs/efftl.hpp"
#include "rhs/obe.hpp"
#include "rhs/scan.hpp"
#include "rhs/sigchain.hpp"
#include "rhs/version.hpp"

namespace rhs::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sci(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.8e", value);
  return buffer;
}

json system_snapshot(const atomsys::ValidatedSystem& sys) {
  const atomsys::SystemConfig& c = sys.config();
  return json{
      {"mass_kg", c.species.mass},
      {"wavelength_probe_m", c.species.wavelength_probe},
      {"wavelength_coupling_m", c.species.wavelength_coupling},
      {"dipole_Cm", c.species.dipole_probe},
      {"isotope_abundance", c.species.isotope_abundance},
      {"probe_rabi_mhz", rad_to_mhz(c.probe.rabi)},
      {"probe_detuning_mhz", rad_to_mhz(c.probe.detuning)},
      {"probe_wavevector_rad_m", c.probe.wavevector},
      {"coupling_rabi_mhz", rad_to_mhz(c.coupling.rabi)},
      {"coupling_detuning_mhz", rad_to_mhz(c.coupling.detuning)},
      {"coupling_wavevector_rad_m", c.coupling.wavevector},
      {"gamma_eg_mhz", rad_to_mhz(c.rates.gamma_eg)},
      {"gamma_re_mhz", rad_to_mhz(c.rates.gamma_re)},
      {"gamma_rg_mhz", rad_to_mhz(c.rates.gamma_rg)},
      {"gamma_rel_mhz", rad_to_mhz(c.rates.gamma_rel)},
      {"density_m3", c.density},
      {"temperature_K", c.temperature},
      {"cell_length_m", c.cell_length},
      {"thermal_speed_m_s", c.thermal_speed},
      {"delta_k_rad_m", c.delta_k},
  };
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_io::ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw config_io::ConfigError("short write to " + path.string());
}

void write_manifest(const fs::path& path, const std::string& subcommand,
                    const std::string& config_path,
                    const std::vector<std::string>& argv, json parameters,
                    const std::vector<std::string>& outputs) {
  json manifest{
      {"tool_version", kVersion},
      {"subcommand", subcommand},
      {"config_path", config_path},
      {"argv", argv},
      {"parameters", std::move(parameters)},
      {"outputs", outputs},
  };
  write_text(path, manifest.dump(2) + "\n");
}

struct ScanArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::string engine = "full";
  double span_mhz = 400.0;
  int points = 401;
  double noise_urad = -1.0;  // negative: keep the config value
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int run_scan(const ScanArgs& a, const std::vector<std::string>& argv,
             std::ostream& out) {
  const config_io::LoadedConfig cfg = config_io::load_config(a.config_path);
  const atomsys::ValidatedSystem sys = atomsys::validate(cfg.system);

  sigchain::MeasurementChain chain = cfg.chain;
  if (a.noise_urad >= 0.0) chain.phase_noise_rms = a.noise_urad * 1e-6;
  if (a.seed_given) {
    chain.rng_seed = a.seed;
    chain.seeded = true;
  }
  const bool noisy = chain.seeded && chain.phase_noise_rms > 0.0;

  scan::ScanOptions opt;
  opt.engine = a.engine == "full" ? scan::Engine::Full
                                  : scan::Engine::EffectiveTL;
  opt.points = a.points;
  opt.span = mhz_to_rad(a.span_mhz);
  const scan::Spectrum spectrum = scan::scan_spectrum(sys, opt);

  sigchain::PhaseNoise noise(chain.phase_noise_rms, chain.rng_seed);
  std::ostringstream csv;
  csv << "delta_c_MHz,re_chi,im_chi,phase_urad\n";
  for (const scan::SpectrumPoint& p : spectrum.points) {
    const double jitter = noisy ? noise.sample() : 0.0;
    csv << sci(rad_to_mhz(p.delta_c)) << ',' << sci(p.chi_re) << ','
        << sci(p.chi_im) << ',' << sci((p.phase + jitter) * 1e6) << '\n';
  }

  fs::create_directories(a.out_dir);
  const fs::path csv_path = fs::path(a.out_dir) / "scan.csv";
  write_text(csv_path, csv.str());

  json params{
      {"engine", a.engine},
      {"points", a.points},
      {"span_mhz", a.span_mhz},
      {"center_mhz", rad_to_mhz(sys.coupling().detuning)},
      {"rel_tol", opt.quad.rel_tol},
      {"noise_urad", noisy ? chain.phase_noise_rms * 1e6 : 0.0},
      {"clipped", spectrum.meta.clipped},
      {"system", system_snapshot(sys)},
  };
  if (chain.seeded)
    params["seed"] = chain.rng_seed;
  else
    params["seed"] = nullptr;

  const fs::path manifest_path = fs::path(a.out_dir) / "scan_manifest.json";
  write_manifest(manifest_path, "scan", a.config_path, argv, params,
                 {csv_path.string()});
  out << "wrote " << csv_path.string() << " (" << spectrum.points.size()
      << " points)\n";
  return kOk;
}

// Accepts either the scan CSV schema or the two-column measured schema.
void load_phase_csv(const std::string& path, std::vector<double>& x_mhz,
                    std::vector<double>& y_urad) {
  std::ifstream in(path);
  if (!in) throw config_io::ConfigError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw config_io::ConfigError(path + ": empty file");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  int phase_column = -1;
  if (header == "delta_c_MHz,re_chi,im_chi,phase_urad")
    phase_column = 3;
  else if (header == "detuning_MHz,phase_urad")
    phase_column = 1;
  else
    throw config_io::ConfigError(path + ": unrecognized header '" + header +
                                 "'");

  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(row, field, ','))
      values.push_back(std::strtod(field.c_str(), nullptr));
    if (static_cast<int>(values.size()) <= phase_column)
      throw config_io::ConfigError(path + ": short row on line " +
                                   std::to_string(lineno));
    x_mhz.push_back(values[0]);
    y_urad.push_back(values[phase_column]);
  }
  if (x_mhz.empty()) throw config_io::ConfigError(path + ": no data rows");
}

int run_peakfit(const std::string& in_path, const std::string& out_dir,
                const std::vector<std::string>& argv, std::ostream& out) {
  std::vector<double> x_mhz;
  std::vector<double> y_urad;
  load_phase_csv(in_path, x_mhz, y_urad);

  const scan::FitResult fit = scan::gaussian_fit(x_mhz, y_urad);
  if (!fit.converged)
    throw std::runtime_error("peak fit did not converge after " +
                             std::to_string(fit.iterations) + " iterations");

  json result{
      {"amplitude_urad", fit.amplitude},
      {"center_mhz", fit.center},
      {"width_mhz", fit.width},
      {"rms_residual_urad", fit.rms_residual},
      {"converged", fit.converged},
      {"iterations", fit.iterations},
  };

  fs::create_directories(out_dir);
  const fs::path json_path = fs::path(out_dir) / "peakfit.json";
  write_text(json_path, result.dump(2) + "\n");
  write_manifest(fs::path(out_dir) / "peakfit_manifest.json", "peakfit",
                 in_path, argv, json{{"input", in_path}},
                 {json_path.string()});
  out << result.dump(2) << "\n";
  return kOk;
}

int run_invert(const std::string& config_path, double phase_urad,
               const std::string& out_dir,
               const std::vector<std::string>& argv, std::ostream& out) {
  const config_io::LoadedConfig cfg = config_io::load_config(config_path);
  const atomsys::ValidatedSystem sys = atomsys::validate(cfg.system);

  const efftl::EffectiveTL eff = efftl::effective_params(
      sys, sys.coupling().detuning, 0.0);
  const double omega_eff = std::abs(eff.omega_eff);
  const double rho_rr =
      sigchain::invert_population(phase_urad * 1e-6, sys, omega_eff);

  json result{
      {"phase_urad", phase_urad},
      {"omega_eff_mhz", rad_to_mhz(omega_eff)},
      {"rho_rr", rho_rr},
  };

  fs::create_directories(out_dir);
  const fs::path json_path = fs::path(out_dir) / "invert.json";
  write_text(json_path, result.dump(2) + "\n");
  json params{{"phase_urad", phase_urad}, {"system", system_snapshot(sys)}};
  write_manifest(fs::path(out_dir) / "invert_manifest.json", "invert",
                 config_path, argv, params, {json_path.string()});
  out << result.dump(2) << "\n";
  return kOk;
}

int run_ratio(double delta_p_mhz, double omega_p_mhz, double gamma_rg_mhz,
              const std::string& out_dir, bool out_given,
              const std::vector<std::string>& argv, std::ostream& out) {
  const double ratio = efftl::im_re_ratio(
      mhz_to_rad(gamma_rg_mhz), mhz_to_rad(delta_p_mhz),
      mhz_to_rad(omega_p_mhz));

  out << "im_re_ratio = " << sci(ratio) << "\n";
  out << "channel,relative_signal\n";
  out << "dispersion," << sci(1.0) << "\n";
  out << "absorption," << sci(std::abs(ratio)) << "\n";

  if (out_given) {
    json result{
        {"delta_p_mhz", delta_p_mhz},
        {"omega_p_mhz", omega_p_mhz},
        {"gamma_rg_mhz", gamma_rg_mhz},
        {"im_re_ratio", ratio},
    };
    fs::create_directories(out_dir);
    const fs::path json_path = fs::path(out_dir) / "ratio.json";
    write_text(json_path, result.dump(2) + "\n");
    write_manifest(fs::path(out_dir) / "ratio_manifest.json", "ratio", "",
                   argv, result, {json_path.string()});
  }
  return kOk;
}

int run_vapor(double tmin, double tmax, double step, double abundance,
              const std::string& out_dir, bool out_given,
              const std::vector<std::string>& argv, std::ostream& out) {
  if (!(step > 0.0) || tmax < tmin)
    throw std::domain_error("vapor: need step > 0 and tmax >= tmin");
  atomsys::AtomSpecies species;
  species.isotope_abundance = abundance;

  std::ostringstream csv;
  csv << "temperature_K,density_m3\n";
  for (double t = tmin; t <= tmax + 1e-9; t += step)
    csv << sci(t) << ',' << sci(atomsys::vapor_density(t, species)) << '\n';

  out << csv.str();
  if (out_given) {
    fs::create_directories(out_dir);
    const fs::path csv_path = fs::path(out_dir) / "vapor.csv";
    write_text(csv_path, csv.str());
    json params{{"tmin_K", tmin},
                {"tmax_K", tmax},
                {"step_K", step},
                {"isotope_abundance", abundance}};
    write_manifest(fs::path(out_dir) / "vapor_manifest.json", "vapor", "",
                   argv, params, {csv_path.string()});
  }
  return kOk;
}

int run_validate(const std::string& config_path, std::ostream& out) {
  const config_io::LoadedConfig cfg = config_io::load_config(config_path);
  const atomsys::ValidatedSystem sys = atomsys::validate(cfg.system);
  out << "config ok: " << config_path << "\n";
  out << "  thermal_speed_m_s = " << sci(sys.thermal_speed()) << "\n";
  out << "  delta_k_rad_m = " << sci(sys.delta_k()) << "\n";
  out << "  density_m3 = " << sci(sys.density())
      << (cfg.density_auto ? " (auto)" : "") << "\n";
  out << "  two_photon_detuning_MHz = "
      << sci(rad_to_mhz(sys.two_photon_detuning())) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Rydberg heterodyne spectroscopy toolkit"};
  app.require_subcommand(1);

  ScanArgs scan_args;
  CLI::App* scan_cmd =
      app.add_subcommand("scan", "Coupling-detuning spectrum to CSV");
  scan_cmd->add_option("--config", scan_args.config_path, "INI config file")
      ->required();
  scan_cmd->add_option("--out", scan_args.out_dir, "output directory");
  scan_cmd->add_option("--engine", scan_args.engine, "full | eff2l")
      ->check(CLI::IsMember({"full", "eff2l"}));
  scan_cmd->add_option("--span-mhz", scan_args.span_mhz, "scan width, MHz");
  scan_cmd->add_option("--points", scan_args.points, "number of points");
  scan_cmd->add_option("--noise-urad", scan_args.noise_urad,
                       "phase noise RMS, urad (needs --seed)");
  CLI::Option* seed_opt =
      scan_cmd->add_option("--seed", scan_args.seed, "noise RNG seed");

  std::string peakfit_in;
  std::string peakfit_out = ".";
  CLI::App* peakfit_cmd =
      app.add_subcommand("peakfit", "Gaussian fit of a spectrum CSV");
  peakfit_cmd->add_option("--in", peakfit_in, "spectrum CSV")->required();
  peakfit_cmd->add_option("--out", peakfit_out, "output directory");

  std::string invert_config;
  std::string invert_out = ".";
  double invert_phase_urad = 0.0;
  CLI::App* invert_cmd = app.add_subcommand(
      "invert", "Rydberg population from a measured peak phase");
  invert_cmd->add_option("--config", invert_config, "INI config file")
      ->required();
  invert_cmd->add_option("--phase-urad", invert_phase_urad, "peak phase, urad")
      ->required();
  invert_cmd->add_option("--out", invert_out, "output directory");

  double ratio_delta_p = 1000.0;
  double ratio_omega_p = 250.0;
  double ratio_gamma_rg = 0.5;
  std::string ratio_out;
  CLI::App* ratio_cmd = app.add_subcommand(
      "ratio", "Absorption-to-dispersion signal ratio");
  ratio_cmd->add_option("--delta-p-mhz", ratio_delta_p, "probe detuning, MHz");
  ratio_cmd->add_option("--omega-p-mhz", ratio_omega_p, "probe Rabi, MHz");
  ratio_cmd->add_option("--gamma-rg-mhz", ratio_gamma_rg,
                        "Rydberg-ground decay, MHz");
  CLI::Option* ratio_out_opt =
      ratio_cmd->add_option("--out", ratio_out, "output directory");

  double vapor_tmin = 303.15;
  double vapor_tmax = 403.15;
  double vapor_step = 10.0;
  double vapor_abundance = 1.0;
  std::string vapor_out;
  CLI::App* vapor_cmd =
      app.add_subcommand("vapor", "Saturated vapor density vs temperature");
  vapor_cmd->add_option("--tmin-k", vapor_tmin, "start temperature, K");
  vapor_cmd->add_option("--tmax-k", vapor_tmax, "end temperature, K");
  vapor_cmd->add_option("--step-k", vapor_step, "temperature step, K");
  vapor_cmd->add_option("--abundance", vapor_abundance, "isotope fraction");
  CLI::Option* vapor_out_opt =
      vapor_cmd->add_option("--out", vapor_out, "output directory");

  std::string validate_config;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a config file and report");
  validate_cmd->add_option("--config", validate_config, "INI config file")
      ->required();

  std::vector<char*> argv;
  std::string program = "rhs";
  argv.push_back(program.data());
  std::vector<std::string> owned(args);
  for (std::string& a : owned) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (app.got_subcommand(scan_cmd)) {
      scan_args.seed_given = seed_opt->count() > 0;
      return run_scan(scan_args, args, out);
    }
    if (app.got_subcommand(peakfit_cmd))
      return run_peakfit(peakfit_in, peakfit_out, args, out);
    if (app.got_subcommand(invert_cmd))
      return run_invert(invert_config, invert_phase_urad, invert_out, args,
                        out);
    if (app.got_subcommand(ratio_cmd))
      return run_ratio(ratio_delta_p, ratio_omega_p, ratio_gamma_rg, ratio_out,
                       ratio_out_opt->count() > 0, args, out);
    if (app.got_subcommand(vapor_cmd))
      return run_vapor(vapor_tmin, vapor_tmax, vapor_step, vapor_abundance,
                       vapor_out, vapor_out_opt->count() > 0, args, out);
    if (app.got_subcommand(validate_cmd))
      return run_validate(validate_config, out);
    err << "error[usage]: no subcommand\n";
    return kUsageError;
  } catch (const config_io::ConfigError& e) {
    err << "error[config]: " << e.what() << "\n";
    return kConfigError;
  } catch (const atomsys::ValidationError& e) {
    err << "error[config]: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error[numeric]: " << e.what() << "\n";
    return kNumericalError;
  }
}

int run(const std::vector<std::string>& args) {
  return run(args, std::cout, std::cerr);
}

}  // namespace rhs::cli
