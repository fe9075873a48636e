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

#pragma once

// Data-parallel inner loops shared by the estimator and the simulator.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant chosen at runtime. The SIMD variants vectorize across independent
// outputs and keep the reference's operation order (no FMA, no horizontal
// reassociation), so both produce bit-identical results. The equivalence
// tests rely on that.

#include <complex>
#include <cstddef>

namespace sphdoa::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  const char* name;

  // out[i] = sum_j ||p_i - p_j||_2, j summed in increasing order.
  void (*chord_distance_sums)(const double* x, const double* y, const double* z,
                              std::size_t n, double* out);

  // Pseudo-intensity Re{conj(w) * a} for the three dipole channels.
  void (*pseudo_intensity)(const cplx* w, const cplx* ax, const cplx* ay,
                           const cplx* az, std::size_t n, double* ix,
                           double* iy, double* iz);

  // out[i] = a[i] * b[i]
  void (*complex_multiply)(const cplx* a, const cplx* b, std::size_t n,
                           cplx* out);

  // acc[i] += alpha * x[i]
  void (*axpy_real)(double alpha, const cplx* x, std::size_t n, cplx* acc);

  // out[i] = coarse[i / block] * fine[i % block]
  void (*phasor_fill)(const cplx* coarse, const cplx* fine, std::size_t block,
                      std::size_t n, cplx* out);
};

const KernelTable& scalar_table();

// nullptr when the build has no AVX2 variant or the CPU lacks AVX2.
const KernelTable* avx2_table();

// The table used by the library. Picked once per process: AVX2 when
// available, unless SPHDOA_SIMD=scalar is set in the environment.
const KernelTable& active();

}  // namespace sphdoa::kernels
