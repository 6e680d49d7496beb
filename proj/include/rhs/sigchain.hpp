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

#include <cstdint>
#include <functional>
#include <random>

#include "rhs/atomsys.hpp"

namespace rhs::sigchain {

struct MeasurementChain {
  double gain = 1.0;               // dimensionless
  double mixer_sensitivity = 1.0;  // V/rad
  double phase_noise_rms = 0.0;    // rad
  std::uint64_t rng_seed = 0;
  bool seeded = false;  // noise is applied only with an explicit seed
};

// Rabi frequency along the beam at distance z from the focus.
double rabi_profile(double peak_rabi, double z, double rayleigh_range);

// Heterodyne phase from a uniform susceptibility: phi = k_p l Re(chi) / 2.
double phase_uniform(double chi_real, double k_p, double length);

// Midpoint-rule phase for beams focused at the cell midpoint; chi_at maps
// the local probe and coupling Rabi frequencies to Re(chi). At least 64
// panels.
double phase_profile_integrated(const atomsys::ValidatedSystem& sys,
                                const std::function<double(double, double)>& chi_at,
                                int panels = 64);

// Deterministic Gaussian phase noise stream.
class PhaseNoise {
 public:
  PhaseNoise(double rms, std::uint64_t seed) : rng_(seed), dist_(0.0, 1.0), rms_(rms) {}
  double sample() { return rms_ <= 0.0 ? 0.0 : rms_ * dist_(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_;
  double rms_;
};

// V = G eta phi, and back. Inversion requires G eta != 0.
double lockin_output(double phase, const MeasurementChain& chain);
double lockin_invert(double volts, const MeasurementChain& chain);

// Rydberg population from a measured peak phase:
// rho_rr = (2 eps0 hbar delta_p / (N mu^2)) (|delta_k| v_p / (sqrt(pi) omega_eff))
//          (lambda_p / l) phi.
// Requires omega_eff > 0 and phi >= 0.
double invert_population(double phase, const atomsys::ValidatedSystem& sys,
                         double omega_eff);

}  // namespace rhs::sigchain
