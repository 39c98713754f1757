// Copyright 2026 the pmlab developers.
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

#include "pmlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace pmlab::kernels {
namespace {

Backend g_backend = Backend::scalar;
bool g_initialized = false;

Backend detect() {
#if defined(PMLAB_HAVE_AVX2)
  const char* env = std::getenv("PMLAB_KERNELS");
  if (env) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) return Backend::avx2;
    // anything else (incl. "auto") falls through to detection
  }
  if (cpu_supports_avx2()) return Backend::avx2;
#endif
  return Backend::scalar;
}

void ensure_init() {
  if (!g_initialized) {
    g_backend = detect();
    g_initialized = true;
  }
}

}  // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active() {
  ensure_init();
#if defined(PMLAB_HAVE_AVX2)
  if (g_backend == Backend::avx2) return avx2_table;
#endif
  return scalar_table;
}

Backend active_backend() {
  ensure_init();
  return g_backend;
}

const char* backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
#if !defined(PMLAB_HAVE_AVX2)
  b = Backend::scalar;
#else
  if (b == Backend::avx2 && !cpu_supports_avx2()) b = Backend::scalar;
#endif
  g_backend = b;
  g_initialized = true;
}

}  // namespace pmlab::kernels
