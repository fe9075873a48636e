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


#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "sphdoa/kernels.hpp"

using sphdoa::kernels::cplx;
using sphdoa::kernels::KernelTable;

namespace {

std::vector<double> randn(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

std::vector<cplx> randc(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> v(n);
  for (cplx& x : v) x = {g(rng), g(rng)};
  return v;
}

template <typename T>
bool bit_equal(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

// Lengths that exercise empty input, short tails and full vectors.
const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 31, 32, 33, 100, 257};

}  // namespace

TEST_CASE("scalar chord sums match the definition") {
  const double x[] = {1, 0, 0}, y[] = {0, 1, 0}, z[] = {0, 0, 1};
  double out[3];
  sphdoa::kernels::scalar_table().chord_distance_sums(x, y, z, 3, out);
  for (double v : out) CHECK(v == doctest::Approx(2 * std::sqrt(2.0)));
}

TEST_CASE("scalar pseudo intensity and complex multiply") {
  const cplx w{1, 2}, a{3, -1};
  double ix, iy, iz;
  sphdoa::kernels::scalar_table().pseudo_intensity(&w, &a, &a, &a, 1, &ix, &iy, &iz);
  CHECK(ix == (std::conj(w) * a).real());
  cplx out;
  sphdoa::kernels::scalar_table().complex_multiply(&w, &a, 1, &out);
  CHECK(out == w * a);
}

TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  const KernelTable* simd = sphdoa::kernels::avx2_table();
  if (simd == nullptr) {
    MESSAGE("AVX2 variant unavailable on this host; skipping");
    return;
  }
  const KernelTable& ref = sphdoa::kernels::scalar_table();
  std::mt19937_64 rng(42);
  for (std::size_t n : kSizes) {
    CAPTURE(n);
    {
      auto x = randn(n, rng), y = randn(n, rng), z = randn(n, rng);
      std::vector<double> a(n), b(n);
      ref.chord_distance_sums(x.data(), y.data(), z.data(), n, a.data());
      simd->chord_distance_sums(x.data(), y.data(), z.data(), n, b.data());
      CHECK(bit_equal(a, b));
    }
    {
      auto w = randc(n, rng), ax = randc(n, rng), ay = randc(n, rng),
           az = randc(n, rng);
      std::vector<double> r[3], s[3];
      for (int c = 0; c < 3; ++c) {
        r[c].resize(n);
        s[c].resize(n);
      }
      ref.pseudo_intensity(w.data(), ax.data(), ay.data(), az.data(), n,
                           r[0].data(), r[1].data(), r[2].data());
      simd->pseudo_intensity(w.data(), ax.data(), ay.data(), az.data(), n,
                             s[0].data(), s[1].data(), s[2].data());
      for (int c = 0; c < 3; ++c) CHECK(bit_equal(r[c], s[c]));
    }
    {
      auto a = randc(n, rng), b = randc(n, rng);
      std::vector<cplx> r(n), s(n);
      ref.complex_multiply(a.data(), b.data(), n, r.data());
      simd->complex_multiply(a.data(), b.data(), n, s.data());
      CHECK(bit_equal(r, s));
      // in place, as the renderer uses it
      auto c = a;
      simd->complex_multiply(c.data(), b.data(), n, c.data());
      CHECK(bit_equal(r, c));
    }
    {
      auto x = randc(n, rng), acc = randc(n, rng);
      auto acc2 = acc;
      ref.axpy_real(0.37, x.data(), n, acc.data());
      simd->axpy_real(0.37, x.data(), n, acc2.data());
      CHECK(bit_equal(acc, acc2));
    }
    for (std::size_t block : {1u, 3u, 8u, 32u}) {
      auto coarse = randc(n / block + 1, rng), fine = randc(block, rng);
      std::vector<cplx> r(n), s(n);
      ref.phasor_fill(coarse.data(), fine.data(), block, n, r.data());
      simd->phasor_fill(coarse.data(), fine.data(), block, n, s.data());
      CHECK(bit_equal(r, s));
    }
  }
}

TEST_CASE("special values survive the avx2 path unchanged") {
  const KernelTable* simd = sphdoa::kernels::avx2_table();
  if (simd == nullptr) return;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<cplx> a = {{inf, 0}, {0, -0.0}, {1e-310, 1e308}, {-0.0, 2}, {3, 4}};
  std::vector<cplx> b = {{1, 1}, {-0.0, 0}, {1e-10, 3}, {5, -0.0}, {0, 0}};
  std::vector<cplx> r(a.size()), s(a.size());
  sphdoa::kernels::scalar_table().complex_multiply(a.data(), b.data(), a.size(), r.data());
  simd->complex_multiply(a.data(), b.data(), a.size(), s.data());
  CHECK(bit_equal(r, s));
}
