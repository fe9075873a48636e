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

#include "sphdoa/special.hpp"

#include <cmath>

namespace sphdoa::special {

double sph_j(int n, double x) {
  if (n < 0) {
    // j_{-1}(x) = cos(x) / x
    return std::cos(x) / x;
  }
  return std::sph_bessel(static_cast<unsigned>(n), x);
}

double sph_y(int n, double x) {
  if (n < 0) return std::sin(x) / x;  // y_{-1}(x) = sin(x) / x
  return std::sph_neumann(static_cast<unsigned>(n), x);
}

cplx sph_h(int n, double x) { return {sph_j(n, x), -sph_y(n, x)}; }

double sph_j_prime(int n, double x) {
  return sph_j(n - 1, x) - (n + 1) / x * sph_j(n, x);
}

cplx sph_h_prime(int n, double x) {
  return sph_h(n - 1, x) - (n + 1) / x * sph_h(n, x);
}

void sph_h_reduced(double x, std::span<cplx> out) {
  if (out.empty()) return;
  const double inv = 1.0 / x;
  out[0] = {0.0, inv};
  if (out.size() == 1) return;
  out[1] = {-inv, inv * inv};
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    out[n + 1] = (2.0 * static_cast<double>(n) + 1.0) * inv * out[n] - out[n - 1];
  }
}

cplx rigid_surface_factor(int n, double x) {
  const cplx hp = sph_h_prime(n, x);
  if (!std::isfinite(std::abs(hp))) return {0.0, 0.0};
  return cplx(0.0, -1.0) / (x * x * hp);
}

}  // namespace sphdoa::special
