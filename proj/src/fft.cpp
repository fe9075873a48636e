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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "sphdoa/geometry.hpp"

namespace sphdoa::fft {
namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Plans live for the whole process.
const Plans& plans_for(std::size_t n) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> real(n);
  std::vector<fftw_complex> spec(n / 2 + 1);
  Plans p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(),
                                   spec.data(), flags);
  p.inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec.data(),
                                   real.data(), flags | FFTW_PRESERVE_INPUT);
  if (p.forward == nullptr || p.inverse == nullptr) {
    throw Error("FFTW could not plan a transform of size " + std::to_string(n));
  }
  return cache.emplace(n, p).first->second;
}

}  // namespace

void forward(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (out.size() != n / 2 + 1) throw Error("fft::forward: bad output size");
  const Plans& p = plans_for(n);
  fftw_execute_dft_r2c(p.forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (in.size() != n / 2 + 1) throw Error("fft::inverse: bad input size");
  const Plans& p = plans_for(n);
  fftw_execute_dft_c2r(
      p.inverse,
      reinterpret_cast<fftw_complex*>(
          const_cast<std::complex<double>*>(in.data())),
      out.data());
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace sphdoa::fft
