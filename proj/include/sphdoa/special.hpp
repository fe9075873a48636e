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

// Spherical Bessel/Hankel helpers. Time convention is exp(+i w t), so the
// outgoing spherical Hankel function is h_n = h_n^(2) = j_n - i y_n.

#include <complex>
#include <span>

namespace sphdoa::special {

using cplx = std::complex<double>;

double sph_j(int n, double x);
double sph_y(int n, double x);
cplx sph_h(int n, double x);

// d/dx of the above, via f_n' = f_{n-1} - (n+1)/x f_n.
double sph_j_prime(int n, double x);
cplx sph_h_prime(int n, double x);

// Reduced Hankel functions rho_n(x) = h_n(x) exp(i x) for n = 0..out.size()-1.
// These are polynomials in 1/x; upward recurrence is stable for them.
void sph_h_reduced(double x, std::span<cplx> out);

// Pressure factor on the surface of a rigid sphere,
//   j_n(x) - j_n'(x) / h_n'(x) * h_n(x) = -i / (x^2 h_n'(x)),
// using the Wronskian form to avoid cancellation.
cplx rigid_surface_factor(int n, double x);

}  // namespace sphdoa::special
