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

#include "sphdoa/tf_analysis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "sphdoa/geometry.hpp"

namespace sphdoa {

MultichannelSignal::MultichannelSignal(std::size_t channels, std::size_t length,
                                       double sample_rate)
    : channels_(channels),
      length_(length),
      sample_rate_(sample_rate),
      samples_(channels * length, 0.0) {
  if (!(sample_rate > 0.0)) throw Error("sample rate must be positive");
}

TfGrid::TfGrid(std::size_t channels, std::size_t bins, std::size_t frames,
               std::size_t fft_size, std::size_t hop, double sample_rate)
    : channels_(channels),
      bins_(bins),
      frames_(frames),
      fft_size_(fft_size),
      hop_(hop),
      sample_rate_(sample_rate),
      data_(channels * bins * frames) {}

std::vector<double> analysis_window(Window w, std::size_t n) {
  std::vector<double> win(n, 1.0);
  if (w == Window::kHann) {
    // Periodic Hann.
    for (std::size_t i = 0; i < n; ++i) {
      win[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                    static_cast<double>(i) /
                                    static_cast<double>(n));
    }
  }
  return win;
}

Spectrogram stft(const MultichannelSignal& sig, const StftParams& params) {
  const std::size_t n = params.fft_size;
  if (n < 2 || (n & (n - 1)) != 0) {
    throw Error("fft_size must be a power of two");
  }
  if (!(params.overlap >= 0.0 && params.overlap < 1.0)) {
    throw Error("overlap must lie in [0, 1)");
  }
  const auto hop = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * (1.0 - params.overlap)));
  if (hop == 0) throw Error("overlap leaves a zero hop");
  if (sig.length() < n) {
    throw Error("signal shorter than one analysis frame (" +
                std::to_string(sig.length()) + " < " + std::to_string(n) +
                " samples)");
  }
  const std::size_t frames = (sig.length() - n) / hop + 1;
  const std::size_t bins = n / 2 + 1;
  Spectrogram spec(sig.channels(), bins, frames, n, hop, sig.sample_rate());
  const std::vector<double> win = analysis_window(params.window, n);
  std::vector<double> buf(n);
  for (std::size_t c = 0; c < sig.channels(); ++c) {
    const auto x = sig.channel(c);
    for (std::size_t t = 0; t < frames; ++t) {
      const std::size_t off = t * hop;
      for (std::size_t i = 0; i < n; ++i) buf[i] = x[off + i] * win[i];
      fft::forward(buf, spec.frame(c, t));
    }
  }
  return spec;
}

std::vector<std::size_t> band_mask(const TfGrid& spec, double f_lo,
                                   double f_hi) {
  const double nyquist = spec.sample_rate() / 2.0;
  if (!(f_lo >= 0.0 && f_lo <= f_hi && f_hi <= nyquist)) {
    throw Error("band must satisfy 0 <= f_lo <= f_hi <= Nyquist");
  }
  std::vector<std::size_t> ks;
  const double df = spec.bin_hz();
  for (std::size_t k = 0; k < spec.bins(); ++k) {
    const double f = static_cast<double>(k) * df;
    if (f >= f_lo && f <= f_hi) ks.push_back(k);
  }
  if (ks.empty()) throw Error("frequency band contains no bins");
  return ks;
}

}  // namespace sphdoa
