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

#include <string>

#include "rhs/atomsys.hpp"
#include "rhs/sigchain.hpp"

namespace rhs::config_io {

// INI sections: [species], [probe], [coupling], [rates], [cell], [chain].
// Frequencies and rates are linear MHz in the file and angular rad/s in
// memory; lengths m, temperature K. density_m3 accepts "auto" to use the
// saturated-vapor value at the cell temperature.
struct LoadedConfig {
  atomsys::SystemConfig system;
  sigchain::MeasurementChain chain;
  bool density_auto = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LoadedConfig load_config(const std::string& path);
void save_config(const LoadedConfig& cfg, const std::string& path);

}  // namespace rhs::config_io
