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

#include <cmath>

#include "sphdoa/kernels.hpp"

namespace sphdoa::kernels {
namespace {

void chord_distance_sums(const double* x, const double* y, const double* z,
                         std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const double dz = z[i] - z[j];
      sum += std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    out[i] = sum;
  }
}

void pseudo_intensity(const cplx* w, const cplx* ax, const cplx* ay,
                      const cplx* az, std::size_t n, double* ix, double* iy,
                      double* iz) {
  for (std::size_t i = 0; i < n; ++i) {
    const double wr = w[i].real();
    const double wi = w[i].imag();
    ix[i] = wr * ax[i].real() + wi * ax[i].imag();
    iy[i] = wr * ay[i].real() + wi * ay[i].imag();
    iz[i] = wr * az[i].real() + wi * az[i].imag();
  }
}

// Written out rather than via std::complex::operator*, which adds NaN
// recovery branches and would not match the SIMD path.
inline cplx cmul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

void complex_multiply(const cplx* a, const cplx* b, std::size_t n, cplx* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = cmul(a[i], b[i]);
}

void axpy_real(double alpha, const cplx* x, std::size_t n, cplx* acc) {
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] = {acc[i].real() + alpha * x[i].real(),
              acc[i].imag() + alpha * x[i].imag()};
  }
}

void phasor_fill(const cplx* coarse, const cplx* fine, std::size_t block,
                 std::size_t n, cplx* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = cmul(coarse[i / block], fine[i % block]);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar",          chord_distance_sums,
                                 pseudo_intensity,  complex_multiply,
                                 axpy_real,         phasor_fill};
  return table;
}

}  // namespace sphdoa::kernels
