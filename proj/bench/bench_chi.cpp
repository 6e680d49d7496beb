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

#include <benchmark/benchmark.h>

#include "rhs/atomsys.hpp"
#include "rhs/constants.hpp"
#include "rhs/doppler.hpp"
#include "rhs/scan.hpp"

namespace {

rhs::atomsys::ValidatedSystem reference_system() {
  rhs::atomsys::SystemConfig cfg;
  cfg.species.mass = 84.911789738 * rhs::kAtomicMassUnit;
  cfg.species.wavelength_probe = 780.241e-9;
  cfg.species.wavelength_coupling = 480.0e-9;
  cfg.species.dipole_probe = 3.584e-29;
  cfg.species.isotope_abundance = 0.72;
  cfg.probe.rabi = rhs::mhz_to_rad(400.0);
  cfg.probe.detuning = rhs::mhz_to_rad(1300.0);
  cfg.probe.wavevector = rhs::kTwoPi / cfg.species.wavelength_probe;
  cfg.probe.waist = 35e-6;
  cfg.probe.rayleigh_range = 12e-3;
  cfg.coupling.rabi = rhs::mhz_to_rad(24.0);
  cfg.coupling.detuning = rhs::mhz_to_rad(-1300.0);
  cfg.coupling.wavevector = -rhs::kTwoPi / cfg.species.wavelength_coupling;
  cfg.coupling.waist = 50e-6;
  cfg.coupling.rayleigh_range = 10e-3;
  cfg.rates.gamma_eg = rhs::mhz_to_rad(6.0);
  cfg.rates.gamma_re = rhs::mhz_to_rad(0.01);
  cfg.rates.gamma_rg = rhs::mhz_to_rad(0.5);
  cfg.rates.gamma_rel = rhs::mhz_to_rad(0.5);
  cfg.density = 3.0e19;
  cfg.temperature = 403.15;
  cfg.cell_length = 0.05;
  return rhs::atomsys::validate(cfg);
}

void BM_ChiPoint(benchmark::State& state) {
  const rhs::atomsys::ValidatedSystem sys = reference_system();
  rhs::doppler::QuadratureOptions opt;
  opt.rel_tol = 1e-5;
  opt.policy = state.range(0) == 0 ? rhs::ExecPolicy::Serial
                                   : rhs::ExecPolicy::Parallel;
  const double delta_c = rhs::mhz_to_rad(-1300.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs::doppler::chi_3l(sys, delta_c, opt));
  }
}
BENCHMARK(BM_ChiPoint)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_Scan(benchmark::State& state) {
  const rhs::atomsys::ValidatedSystem sys = reference_system();
  rhs::scan::ScanOptions opt;
  opt.points = 17;
  opt.span = rhs::mhz_to_rad(100.0);
  opt.quad.rel_tol = 1e-5;
  opt.policy = state.range(0) == 0 ? rhs::ExecPolicy::Serial
                                   : rhs::ExecPolicy::Parallel;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs::scan::scan_spectrum(sys, opt));
  }
}
BENCHMARK(BM_Scan)->Arg(0)->Arg(1)->ArgNames({"parallel"});

void BM_ScanEff2l(benchmark::State& state) {
  const rhs::atomsys::ValidatedSystem sys = reference_system();
  rhs::scan::ScanOptions opt;
  opt.engine = rhs::scan::Engine::EffectiveTL;
  opt.points = 101;
  opt.span = rhs::mhz_to_rad(100.0);
  opt.policy = state.range(0) == 0 ? rhs::ExecPolicy::Serial
                                   : rhs::ExecPolicy::Parallel;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs::scan::scan_spectrum(sys, opt));
  }
}
BENCHMARK(BM_ScanEff2l)->Arg(0)->Arg(1)->ArgNames({"parallel"});

}  // namespace

BENCHMARK_MAIN();
