// Copyright 2026 The sphdoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <string_view>

#include "sphdoa/kernels.hpp"

namespace sphdoa::kernels {

#if SPHDOA_HAVE_AVX2
const KernelTable& avx2_kernels();
#endif

const KernelTable* avx2_table() {
#if SPHDOA_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = [&]() -> const KernelTable& {
    const char* env = std::getenv("SPHDOA_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") {
      return scalar_table();
    }
    if (const KernelTable* simd = avx2_table()) return *simd;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace sphdoa::kernels
