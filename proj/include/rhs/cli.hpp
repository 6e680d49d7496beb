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

#include <iosfwd>
#include <string>
#include <vector>

namespace rhs::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

// Entry point shared by the binary and the tests; args excludes argv[0].
// Errors print one line starting with "error[usage]:", "error[config]:"
// or "error[numeric]:".
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace rhs::cli
