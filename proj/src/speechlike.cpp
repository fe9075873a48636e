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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sphdoa/simulator.hpp"

namespace sphdoa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Segment {
  std::size_t begin;
  std::size_t end;
};

// Resonance-shaped gain of a vowel-like envelope at frequency f.
double formant_gain(double f, const double (&formants)[3]) {
  constexpr double kBandwidth[3] = {90.0, 130.0, 180.0};
  constexpr double kLevel[3] = {1.0, 0.6, 0.3};
  double g = 0.04;
  for (int i = 0; i < 3; ++i) {
    const double d = (f - formants[i]) / kBandwidth[i];
    g += kLevel[i] / (1.0 + d * d);
  }
  return g / (1.0 + f / 1500.0);
}

// Two-pole resonator (RBJ band-pass, constant peak gain).
class Resonator {
 public:
  Resonator(double fc, double q, double fs) {
    const double w0 = kTwoPi * fc / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0_ = alpha / a0;
    a1_ = -2.0 * std::cos(w0) / a0;
    a2_ = (1.0 - alpha) / a0;
  }
  double step(double x) {
    const double y = b0_ * x - b0_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double b0_, a1_, a2_;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

void render_voiced(std::span<double> out, double fs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };
  const double f0_start = between(90.0, 250.0);
  const double f0_end = std::clamp(f0_start * between(0.8, 1.25), 90.0, 250.0);
  const double vib_rate = between(3.0, 6.0);
  const double vib_depth = between(0.0, 0.02);
  double from[3] = {between(300, 800), between(900, 2200), between(2300, 3000)};
  double to[3] = {between(300, 800), between(900, 2200), between(2300, 3000)};
  constexpr int kMaxHarmonics = 42;
  double phase[kMaxHarmonics];
  for (double& p : phase) p = kTwoPi * uni(rng);

  const std::size_t n = out.size();
  double f0_phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    const double t = static_cast<double>(i) / fs;
    const double f0 = (f0_start + (f0_end - f0_start) * a) *
                      (1.0 + vib_depth * std::sin(kTwoPi * vib_rate * t));
    f0_phase += kTwoPi * f0 / fs;
    double formants[3];
    for (int j = 0; j < 3; ++j) formants[j] = from[j] + (to[j] - from[j]) * a;
    double v = 0.0;
    for (int h = 1; h <= kMaxHarmonics; ++h) {
      const double fh = h * f0;
      if (fh > 3800.0) break;
      v += formant_gain(fh, formants) * std::sin(h * f0_phase + phase[h - 1]);
    }
    out[i] += v;
  }
}

void render_unvoiced(std::span<double> out, double fs, double level,
                     std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(1800.0, 3000.0);
  Resonator r1(uni(rng), 1.2, fs);
  Resonator r2(uni(rng), 1.2, fs);
  for (double& v : out) v += level * r2.step(r1.step(gauss(rng)));
}

}  // namespace

SpeechLike gen_speechlike(double duration, double sample_rate,
                          std::uint64_t seed) {
  if (!(duration > 0.0) || !(sample_rate > 0.0)) {
    throw Error("duration and sample rate must be positive");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
  SpeechLike sl;
  sl.samples.assign(n, 0.0);
  sl.active.assign(n, 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };

  // Gap/syllable pairs; every pair keeps its active share in [0.45, 0.65],
  // so the whole signal does too (up to rounding).
  std::vector<Segment> segments;
  std::size_t pos = 0;
  while (pos < n) {
    auto pair_len =
        static_cast<std::size_t>(std::llround(between(0.25, 0.7) * sample_rate));
    const double share = between(0.45, 0.65);
    pair_len = std::min(std::max<std::size_t>(pair_len, 2), n - pos);
    const auto active = static_cast<std::size_t>(
        std::llround(share * static_cast<double>(pair_len)));
    const std::size_t gap = pair_len - active;
    if (active > 0) segments.push_back({pos + gap, pos + pair_len});
    pos += pair_len;
  }

  const auto ramp = static_cast<std::size_t>(0.02 * sample_rate);
  for (const Segment& seg : segments) {
    std::span<double> out(sl.samples.data() + seg.begin, seg.end - seg.begin);
    const std::size_t len = out.size();
    std::size_t voiced_from = 0;
    if (uni(rng) < 0.35 && len > 4 * ramp) {
      voiced_from = static_cast<std::size_t>(between(0.03, 0.07) * sample_rate);
      voiced_from = std::min(voiced_from, len / 3);
      render_unvoiced(out.first(voiced_from), sample_rate, 0.15, rng);
    }
    render_voiced(out.subspan(voiced_from), sample_rate, rng);
    const double level = between(0.6, 1.0);
    const std::size_t r = std::min(ramp, len / 2);
    for (std::size_t i = 0; i < len; ++i) {
      double env = 1.0;
      if (i < r) env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / r);
      if (len - 1 - i < r) env = 0.5 - 0.5 * std::cos(std::numbers::pi * (len - 1 - i) / r);
      out[i] *= level * env;
    }
    std::fill(sl.active.begin() + static_cast<std::ptrdiff_t>(seg.begin),
              sl.active.begin() + static_cast<std::ptrdiff_t>(seg.end), 1);
  }

  double energy = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sl.active[i]) continue;
    energy += sl.samples[i] * sl.samples[i];
    ++count;
  }
  if (count > 0 && energy > 0.0) {
    const double scale = 1.0 / std::sqrt(energy / static_cast<double>(count));
    for (double& v : sl.samples) v *= scale;
  }
  return sl;
}

}  // namespace sphdoa
