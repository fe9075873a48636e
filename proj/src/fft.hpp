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

// Thin FFTW wrapper. Plans are created once per size (ESTIMATE mode, so
// planning is deterministic) and executed on caller-owned buffers, which
// makes transforms safe to run from several threads at once.

#include <complex>
#include <cstddef>
#include <span>

namespace sphdoa::fft {

// Forward real-to-complex: `in` has n samples, `out` n/2+1 bins,
// X[k] = sum_t x[t] exp(-2 pi i k t / n).
void forward(std::span<const double> in, std::span<std::complex<double>> out);

// Inverse complex-to-real, unnormalized (caller divides by n).
// `in` has n/2+1 bins and is not modified.
void inverse(std::span<const std::complex<double>> in, std::span<double> out);

std::size_t next_pow2(std::size_t n);

}  // namespace sphdoa::fft
