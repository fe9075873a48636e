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

// Multichannel short-time Fourier analysis.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sphdoa {

using cplx = std::complex<double>;

// Real samples, channel-major: sample t of channel c is at c * length + t.
class MultichannelSignal {
 public:
  MultichannelSignal() = default;
  MultichannelSignal(std::size_t channels, std::size_t length,
                     double sample_rate);

  std::size_t channels() const { return channels_; }
  std::size_t length() const { return length_; }
  double sample_rate() const { return sample_rate_; }

  std::span<double> channel(std::size_t c) {
    return {samples_.data() + c * length_, length_};
  }
  std::span<const double> channel(std::size_t c) const {
    return {samples_.data() + c * length_, length_};
  }
  std::vector<double>& samples() { return samples_; }
  const std::vector<double>& samples() const { return samples_; }

 private:
  std::size_t channels_ = 0;
  std::size_t length_ = 0;
  double sample_rate_ = 0.0;
  std::vector<double> samples_;
};

enum class Window { kHann, kRectangular };

struct StftParams {
  std::size_t fft_size = 1024;
  double overlap = 0.75;
  Window window = Window::kHann;
};

// Time-frequency grid shared by capsule spectrograms and SH spectrograms.
// Storage is channel-major, then frame, then bin, so the flattened TF index
// of (k, t) within a channel is t * bins + k.
class TfGrid {
 public:
  TfGrid() = default;
  TfGrid(std::size_t channels, std::size_t bins, std::size_t frames,
         std::size_t fft_size, std::size_t hop, double sample_rate);

  std::size_t channels() const { return channels_; }
  std::size_t bins() const { return bins_; }
  std::size_t frames() const { return frames_; }
  std::size_t fft_size() const { return fft_size_; }
  std::size_t hop() const { return hop_; }
  double sample_rate() const { return sample_rate_; }
  double bin_hz() const { return sample_rate_ / static_cast<double>(fft_size_); }

  cplx& at(std::size_t c, std::size_t k, std::size_t t) {
    return data_[(c * frames_ + t) * bins_ + k];
  }
  const cplx& at(std::size_t c, std::size_t k, std::size_t t) const {
    return data_[(c * frames_ + t) * bins_ + k];
  }
  // All TF points of one channel, frame-major.
  std::span<cplx> plane(std::size_t c) {
    return {data_.data() + c * frames_ * bins_, frames_ * bins_};
  }
  std::span<const cplx> plane(std::size_t c) const {
    return {data_.data() + c * frames_ * bins_, frames_ * bins_};
  }
  std::span<cplx> frame(std::size_t c, std::size_t t) {
    return {data_.data() + (c * frames_ + t) * bins_, bins_};
  }
  std::span<const cplx> frame(std::size_t c, std::size_t t) const {
    return {data_.data() + (c * frames_ + t) * bins_, bins_};
  }
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  bool same_layout(const TfGrid& o) const {
    return channels_ == o.channels_ && bins_ == o.bins_ &&
           frames_ == o.frames_ && fft_size_ == o.fft_size_ && hop_ == o.hop_;
  }

 private:
  std::size_t channels_ = 0;
  std::size_t bins_ = 0;
  std::size_t frames_ = 0;
  std::size_t fft_size_ = 0;
  std::size_t hop_ = 0;
  double sample_rate_ = 0.0;
  std::vector<cplx> data_;
};

// Capsule-domain spectrogram, one-sided (bins = fft_size / 2 + 1).
using Spectrogram = TfGrid;

std::vector<double> analysis_window(Window w, std::size_t n);

Spectrogram stft(const MultichannelSignal& sig, const StftParams& params);

// Bins k with f_lo <= k * bin_hz <= f_hi. Throws on an empty band.
std::vector<std::size_t> band_mask(const TfGrid& spec, double f_lo,
                                   double f_hi);

}  // namespace sphdoa
