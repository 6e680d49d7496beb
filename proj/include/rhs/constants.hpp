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

namespace rhs {

// CODATA 2018, SI units.
constexpr double kBoltzmann = 1.380649e-23;       // J/K
constexpr double kHbar = 1.054571817e-34;         // J s
constexpr double kEpsilon0 = 8.8541878128e-12;    // F/m
constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
constexpr double kSpeedOfLight = 299792458.0;     // m/s

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

constexpr double kPascalPerTorr = 133.322368421052632;

// Internal frequencies are angular (rad/s); config files carry linear MHz.
constexpr double kRadPerMHz = kTwoPi * 1.0e6;

constexpr double mhz_to_rad(double mhz) { return mhz * kRadPerMHz; }
constexpr double rad_to_mhz(double rad) { return rad / kRadPerMHz; }

}  // namespace rhs
