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

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "sphdoa/kernels.hpp"

namespace sphdoa::kernels {
namespace {

void chord_distance_sums(const double* x, const double* y, const double* z,
                         std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d yi = _mm256_loadu_pd(y + i);
    const __m256d zi = _mm256_loadu_pd(z + i);
    __m256d sum = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n; ++j) {
      const __m256d dx = _mm256_sub_pd(xi, _mm256_set1_pd(x[j]));
      const __m256d dy = _mm256_sub_pd(yi, _mm256_set1_pd(y[j]));
      const __m256d dz = _mm256_sub_pd(zi, _mm256_set1_pd(z[j]));
      __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      d2 = _mm256_add_pd(d2, _mm256_mul_pd(dz, dz));
      sum = _mm256_add_pd(sum, _mm256_sqrt_pd(d2));
    }
    _mm256_storeu_pd(out + i, sum);
  }
  for (; i < n; ++i) {
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

inline const double* raw(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

// Re{conj(w) a} for four complex points; result in natural order.
inline __m256d real_conj_product4(const double* w, const double* a) {
  const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(w), _mm256_loadu_pd(a));
  const __m256d q =
      _mm256_mul_pd(_mm256_loadu_pd(w + 4), _mm256_loadu_pd(a + 4));
  // hadd -> [p0+p1, q0+q1, p2+p3, q2+q3]
  return _mm256_permute4x64_pd(_mm256_hadd_pd(p, q), 0b11011000);
}

void pseudo_intensity(const cplx* w, const cplx* ax, const cplx* ay,
                      const cplx* az, std::size_t n, double* ix, double* iy,
                      double* iz) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double* wp = raw(w + i);
    _mm256_storeu_pd(ix + i, real_conj_product4(wp, raw(ax + i)));
    _mm256_storeu_pd(iy + i, real_conj_product4(wp, raw(ay + i)));
    _mm256_storeu_pd(iz + i, real_conj_product4(wp, raw(az + i)));
  }
  for (; i < n; ++i) {
    const double wr = w[i].real();
    const double wi = w[i].imag();
    ix[i] = wr * ax[i].real() + wi * ax[i].imag();
    iy[i] = wr * ay[i].real() + wi * ay[i].imag();
    iz[i] = wr * az[i].real() + wi * az[i].imag();
  }
}

// (ar br - ai bi, ar bi + ai br) for two complex lanes.
inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d are = _mm256_movedup_pd(a);
  const __m256d aim = _mm256_permute_pd(a, 0xF);
  const __m256d bsw = _mm256_permute_pd(b, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(are, b), _mm256_mul_pd(aim, bsw));
}

inline cplx cmul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

void complex_multiply(const cplx* a, const cplx* b, std::size_t n, cplx* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(raw(out + i), cmul2(_mm256_loadu_pd(raw(a + i)),
                                         _mm256_loadu_pd(raw(b + i))));
  }
  for (; i < n; ++i) out[i] = cmul(a[i], b[i]);
}

void axpy_real(double alpha, const cplx* x, std::size_t n, cplx* acc) {
  const double* xs = raw(x);
  double* as = raw(acc);
  const std::size_t m = 2 * n;
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(xs + i));
    _mm256_storeu_pd(as + i, _mm256_add_pd(_mm256_loadu_pd(as + i), prod));
  }
  for (; i < m; ++i) as[i] = as[i] + alpha * xs[i];
}

void phasor_fill(const cplx* coarse, const cplx* fine, std::size_t block,
                 std::size_t n, cplx* out) {
  for (std::size_t start = 0; start < n; start += block) {
    const std::size_t len = std::min(block, n - start);
    const cplx c = coarse[start / block];
    const __m256d cre = _mm256_set1_pd(c.real());
    const __m256d cim = _mm256_set1_pd(c.imag());
    std::size_t j = 0;
    for (; j + 2 <= len; j += 2) {
      const __m256d f = _mm256_loadu_pd(raw(fine + j));
      const __m256d fsw = _mm256_permute_pd(f, 0x5);
      _mm256_storeu_pd(raw(out + start + j),
                       _mm256_addsub_pd(_mm256_mul_pd(cre, f),
                                        _mm256_mul_pd(cim, fsw)));
    }
    for (; j < len; ++j) out[start + j] = cmul(c, fine[j]);
  }
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{"avx2",           chord_distance_sums,
                                 pseudo_intensity, complex_multiply,
                                 axpy_real,        phasor_fill};
  return table;
}

}  // namespace sphdoa::kernels
