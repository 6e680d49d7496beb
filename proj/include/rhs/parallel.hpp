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

#include <cstddef>

namespace rhs {

enum class ExecPolicy { Serial, Parallel };

// Worker cap shared by all parallel kernels; 0 means the OpenMP default.
// Initialised from the RHS_THREADS environment variable on first use.
int max_threads();
void set_max_threads(int n);

// Thread count a kernel should actually use under the given policy.
int resolve_threads(ExecPolicy policy);

// Parallel map over [0, n). Results must be written to preallocated slots so
// the outcome is bit-identical for any thread count.
template <typename Fn>
void parallel_for_index(std::size_t n, ExecPolicy policy, const Fn& fn) {
  const int threads = resolve_threads(policy);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    fn(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace rhs
