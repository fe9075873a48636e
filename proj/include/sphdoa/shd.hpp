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

// Spherical-harmonic domain: real SH basis (ACN order, orthonormal so that
// Y_0^0 = 1/sqrt(4 pi)), rigid/open sphere mode strength, the capsule-to-SH
// encoder, and the pseudo-intensity DOA field.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sphdoa/geometry.hpp"
#include "sphdoa/tf_analysis.hpp"

namespace sphdoa {

struct ArraySpec {
  double radius = 0.042;  // m
  std::vector<SphDirection> capsules;
  bool rigid = true;

  // 32 capsules at the vertices of a pentakis dodecahedron (icosahedron
  // vertices plus dodecahedron vertices).
  static ArraySpec pentakis_dodecahedron(double radius = 0.042,
                                         bool rigid = true);
  std::vector<UnitVec3> capsule_vectors() const;
};

constexpr std::size_t sh_channel_count(int order) {
  return static_cast<std::size_t>((order + 1) * (order + 1));
}
constexpr std::size_t acn(int n, int m) {
  return static_cast<std::size_t>(n * n + n + m);
}

void sh_basis(const UnitVec3& d, int order, std::span<double> out);
std::vector<double> sh_basis(const SphDirection& d, int order);

// b_n(ka) = 4 pi i^n [j_n - j_n'/h_n' h_n] (rigid) or 4 pi i^n j_n (open).
std::complex<double> mode_strength(int n, double ka, bool rigid);

class ShdSpectrogram : public TfGrid {
 public:
  ShdSpectrogram() = default;
  ShdSpectrogram(int order, std::size_t bins, std::size_t frames,
                 std::size_t fft_size, std::size_t hop, double sample_rate);
  // Wraps an existing grid holding (order+1)^2 SH channels in ACN order.
  ShdSpectrogram(int order, TfGrid grid);

  int order() const { return order_; }

 private:
  int order_ = 0;
};

struct EncoderParams {
  int order = 1;
  double max_gain_db = 20.0;
  double speed_of_sound = 343.0;
};

// Least-squares SHT per bin followed by radial equalization 4 pi / b_n(ka),
// whose magnitude is clamped at max_gain_db. A plane wave from direction
// Omega comes out with a_nm proportional to Y_nm(Omega). The DC bin is
// zeroed.
ShdSpectrogram encode_shd(const Spectrogram& spec, const ArraySpec& arr,
                          const EncoderParams& params);

// Per-TF DOA unit vectors. Index (k, t) lives at t * bins + k.
struct DoaField {
  std::size_t bins = 0;
  std::size_t frames = 0;
  std::vector<UnitVec3> u;
  std::vector<std::uint8_t> valid;
  std::vector<std::size_t> band;

  std::size_t index(std::size_t k, std::size_t t) const { return t * bins + k; }
  std::size_t valid_count() const;
};

// Pseudo-intensity I = Re{conj(a_00) (a_x, a_y, a_z)} with the dipoles taken
// from ACN 3, 1, 2. In the plane-wave-density convention produced by
// encode_shd, I already points from the array toward the source.
// A point is invalid outside `band`, where ||I|| is zero or non-finite, or
// where ||I|| < energy_floor * (median ||I|| over the band in that frame).
DoaField piv_doa_field(const ShdSpectrogram& shd,
                       std::span<const std::size_t> band,
                       double energy_floor = 1e-6);

}  // namespace sphdoa
