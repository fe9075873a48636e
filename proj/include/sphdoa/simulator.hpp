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

// Shoebox room simulation for a spherical array: image sources, rigid-sphere
// capsule rendering, a direct-to-SH fast path, noise injection and a
// synthetic speech-like source.
//
// Rendering works in the frequency domain with exp(+i w t) time dependence,
// which matches the forward DFT used everywhere else: a delay tau multiplies
// a spectrum by exp(-i w tau). A point source of unit strength produces
// free-field pressure exp(-i k d) / d at distance d.

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sphdoa/geometry.hpp"
#include "sphdoa/shd.hpp"
#include "sphdoa/tf_analysis.hpp"

namespace sphdoa {

enum class AbsorptionModel { kSabine, kEyring };

struct RoomSpec {
  Vec3 dims{5.0, 6.0, 4.0};  // m
  double t60 = 0.4;          // s, 0 = anechoic
  double speed_of_sound = 343.0;
  AbsorptionModel absorption = AbsorptionModel::kSabine;
};

// Uniform wall reflection coefficient sqrt(1 - alpha), with alpha from
// Sabine's formula (or Eyring's when configured).
double t60_to_reflection(const RoomSpec& room);

struct ImageSource {
  Vec3 position;  // absolute, m
  double gain = 1.0;
  int order = 0;
};

struct ImageLimits {
  int max_order = 20;
  // Images farther than max_delay * c from the array are dropped;
  // infinity keeps everything up to max_order.
  double max_delay = std::numeric_limits<double>::infinity();
};

// Mirror lattice of a shoebox room. Order 0 (the source itself) comes first;
// the remaining order is deterministic but otherwise unspecified.
std::vector<ImageSource> image_sources(const RoomSpec& room, const Vec3& src,
                                       const Vec3& array_center,
                                       double reflection,
                                       const ImageLimits& limits);

// Images for a scenario source: anechoic rooms yield the direct path only,
// otherwise max_delay defaults to 1.5 * t60.
std::vector<ImageSource> scenario_images(const RoomSpec& room, const Vec3& src,
                                         const Vec3& array_center,
                                         ImageLimits limits);

struct SourceSpec {
  Vec3 position;
  std::vector<double> signal;
};

struct ScenarioSpec {
  RoomSpec room;
  Vec3 array_center{2.5, 3.0, 2.0};
  ArraySpec array = ArraySpec::pentakis_dodecahedron();
  std::vector<SourceSpec> sources;
  double sample_rate = 16000.0;
  double snr_db = 20.0;
  std::uint64_t seed = 0;
  ImageLimits limits;
};

void validate(const ScenarioSpec& sc);

// One-sided capsule transfer functions (capsule-major, nfft/2+1 bins each)
// for a set of image sources given relative to the array center. The SH
// series is truncated once its tail falls below 1e-6 of the largest term.
std::vector<std::vector<std::complex<double>>> array_transfer(
    const ArraySpec& arr, std::span<const ImageSource> images_rel,
    double speed_of_sound, double sample_rate, std::size_t nfft);

// Truncation order used by array_transfer for a given max ka.
int render_truncation_order(double ka_max, bool rigid);

// Capsule signals (one channel per capsule), same length as the sources.
MultichannelSignal render_array(
    const ScenarioSpec& sc, const std::vector<std::vector<ImageSource>>& images);

// SH-domain signals, (order+1)^2 channels in ACN order: every image adds its
// delayed, 1/r-attenuated source signal times 4 pi Y_nm(direction), the same
// scale encode_shd produces from a far-field capsule rendering.
MultichannelSignal render_shd_direct(
    const ScenarioSpec& sc, const std::vector<std::vector<ImageSource>>& images,
    int order);

// Mean power (mean square) of the signal averaged over channels.
double mean_power(const MultichannelSignal& sig);

// i.i.d. Gaussian noise whose realized channel-averaged power is exactly
// `power`.
MultichannelSignal white_noise(std::size_t channels, std::size_t length,
                               double sample_rate, double power,
                               std::uint64_t seed);

// Adds white Gaussian noise so that 10 log10(mean_power(sig) / noise power)
// equals snr_db. snr_db = +inf returns the input unchanged.
MultichannelSignal add_noise_snr(const MultichannelSignal& sig, double snr_db,
                                 std::uint64_t seed);

struct SpeechLike {
  std::vector<double> samples;
  std::vector<std::uint8_t> active;  // 1 inside voiced/unvoiced segments
};

// Sparse speech-like source: syllable-like voiced harmonic segments with a
// drifting f0 in [90, 250] Hz and formant emphasis, occasional unvoiced noise
// onsets, and silent gaps covering 35-55% of the duration. Unit RMS over the
// active samples.
SpeechLike gen_speechlike(double duration, double sample_rate,
                          std::uint64_t seed);

}  // namespace sphdoa
