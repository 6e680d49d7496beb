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

#include "rhs/parallel.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rhs {

namespace {

// -1: not initialised yet, 0: OpenMP default, > 0: explicit cap.
std::atomic<int> g_thread_cap{-1};

int read_env_cap() {
  const char* raw = std::getenv("RHS_THREADS");
  if (raw == nullptr) return 0;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || value < 1) return 0;
  return static_cast<int>(value);
}

}  // namespace

int max_threads() {
  int current = g_thread_cap.load(std::memory_order_relaxed);
  if (current >= 0) return current;
  const int from_env = read_env_cap();
  g_thread_cap.store(from_env, std::memory_order_relaxed);
  return from_env;
}

void set_max_threads(int n) {
  g_thread_cap.store(n < 0 ? 0 : n, std::memory_order_relaxed);
}

int resolve_threads(ExecPolicy policy) {
  if (policy == ExecPolicy::Serial) return 1;
#ifdef _OPENMP
  const int hw = omp_get_max_threads();
#else
  const int hw = 1;
#endif
  const int cap = max_threads();
  return (cap > 0 && cap < hw) ? cap : hw;
}

}  // namespace rhs
