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

#include "sphdoa/shd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sphdoa/kernels.hpp"
#include "sphdoa/special.hpp"

namespace sphdoa {

namespace {
constexpr double kPi = std::numbers::pi;
}

ArraySpec ArraySpec::pentakis_dodecahedron(double radius, bool rigid) {
  if (!(radius > 0.0)) throw Error("array radius must be positive");
  const double phi = std::numbers::phi;
  const double iphi = 1.0 / phi;
  std::vector<Vec3> pts;
  for (double a : {-1.0, 1.0}) {
    for (double b : {-1.0, 1.0}) {
      // Icosahedron.
      pts.push_back({0.0, a, b * phi});
      pts.push_back({a, b * phi, 0.0});
      pts.push_back({b * phi, 0.0, a});
      // Dodecahedron, non-cube part.
      pts.push_back({0.0, a * iphi, b * phi});
      pts.push_back({a * iphi, b * phi, 0.0});
      pts.push_back({b * phi, 0.0, a * iphi});
      for (double c : {-1.0, 1.0}) pts.push_back({a, b, c});
    }
  }
  ArraySpec spec;
  spec.radius = radius;
  spec.rigid = rigid;
  for (const Vec3& p : pts) spec.capsules.push_back(vec_to_dir(UnitVec3(p)));
  return spec;
}

std::vector<UnitVec3> ArraySpec::capsule_vectors() const {
  std::vector<UnitVec3> out;
  out.reserve(capsules.size());
  for (const auto& d : capsules) out.push_back(dir_to_vec(d));
  return out;
}

void sh_basis(const UnitVec3& d, int order, std::span<double> out) {
  if (order < 0) throw Error("SH order must be non-negative");
  if (out.size() < sh_channel_count(order)) {
    throw Error("sh_basis: output span too small");
  }
  const double x = std::clamp(d.z(), -1.0, 1.0);  // cos(theta)
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  const double az = std::atan2(d.y(), d.x());
  // Associated Legendre functions without the Condon-Shortley phase,
  // built column by column in m.
  double pmm = 1.0;
  for (int m = 0; m <= order; ++m) {
    if (m > 0) pmm *= (2.0 * m - 1.0) * s;
    double p_prev = 0.0;
    double p_cur = pmm;
    for (int n = m; n <= order; ++n) {
      if (n == m + 1) {
        p_prev = p_cur;
        p_cur = x * (2.0 * m + 1.0) * pmm;
      } else if (n > m + 1) {
        const double next =
            ((2.0 * n - 1.0) * x * p_cur - (n + m - 1.0) * p_prev) / (n - m);
        p_prev = p_cur;
        p_cur = next;
      }
      const double norm = std::sqrt(
          (2.0 * n + 1.0) / (4.0 * kPi) *
          std::exp(std::lgamma(n - m + 1.0) - std::lgamma(n + m + 1.0)));
      if (m == 0) {
        out[acn(n, 0)] = norm * p_cur;
      } else {
        const double base = std::numbers::sqrt2 * norm * p_cur;
        out[acn(n, m)] = base * std::cos(m * az);
        out[acn(n, -m)] = base * std::sin(m * az);
      }
    }
  }
}

std::vector<double> sh_basis(const SphDirection& d, int order) {
  std::vector<double> out(sh_channel_count(order));
  sh_basis(dir_to_vec(d), order, out);
  return out;
}

std::complex<double> mode_strength(int n, double ka, bool rigid) {
  if (!(ka >= 1e-6)) {
    throw Error("mode strength needs ka >= 1e-6; band-limit the input");
  }
  std::complex<double> in(1.0, 0.0);
  for (int i = 0; i < n % 4; ++i) in *= std::complex<double>(0.0, 1.0);
  const std::complex<double> radial =
      rigid ? special::rigid_surface_factor(n, ka)
            : std::complex<double>(special::sph_j(n, ka), 0.0);
  return 4.0 * kPi * in * radial;
}

ShdSpectrogram::ShdSpectrogram(int order, std::size_t bins, std::size_t frames,
                               std::size_t fft_size, std::size_t hop,
                               double sample_rate)
    : TfGrid(sh_channel_count(order), bins, frames, fft_size, hop, sample_rate),
      order_(order) {}

ShdSpectrogram::ShdSpectrogram(int order, TfGrid grid)
    : TfGrid(std::move(grid)), order_(order) {
  if (channels() != sh_channel_count(order)) {
    throw Error("SH spectrogram channel count does not match its order");
  }
}

ShdSpectrogram encode_shd(const Spectrogram& spec, const ArraySpec& arr,
                          const EncoderParams& params) {
  const int order = params.order;
  if (order < 1) throw Error("encoding order must be at least 1");
  const std::size_t nsh = sh_channel_count(order);
  const std::size_t ncap = arr.capsules.size();
  if (ncap < nsh) {
    throw Error("array has fewer capsules than SH channels for this order");
  }
  if (spec.channels() != ncap) {
    throw Error("spectrogram channel count does not match the array");
  }

  Eigen::MatrixXd basis(ncap, nsh);
  std::vector<double> row(nsh);
  for (std::size_t m = 0; m < ncap; ++m) {
    sh_basis(dir_to_vec(arr.capsules[m]), order, row);
    for (std::size_t c = 0; c < nsh; ++c) basis(m, c) = row[c];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0)) {
    throw Error("SH basis matrix is singular for this capsule layout");
  }
  const Eigen::MatrixXd pinv = svd.matrixV() *
                               sv.cwiseInverse().asDiagonal() *
                               svd.matrixU().transpose();

  ShdSpectrogram out(order, spec.bins(), spec.frames(), spec.fft_size(),
                     spec.hop(), spec.sample_rate());
  const auto& kern = kernels::active();
  const std::size_t plane = spec.frames() * spec.bins();
  for (std::size_t c = 0; c < nsh; ++c) {
    auto dst = out.plane(c);
    for (std::size_t m = 0; m < ncap; ++m) {
      kern.axpy_real(pinv(static_cast<Eigen::Index>(c),
                          static_cast<Eigen::Index>(m)),
                     spec.plane(m).data(), plane, dst.data());
    }
  }

  // Radial equalization per order and bin.
  const double max_gain = std::pow(10.0, params.max_gain_db / 20.0);
  std::vector<std::complex<double>> eq(static_cast<std::size_t>(order + 1) *
                                       spec.bins());
  for (std::size_t k = 0; k < spec.bins(); ++k) {
    const double f = static_cast<double>(k) * spec.bin_hz();
    const double ka = 2.0 * kPi * f * arr.radius / params.speed_of_sound;
    for (int n = 0; n <= order; ++n) {
      std::complex<double> g(0.0, 0.0);
      if (k > 0) {
        g = 4.0 * kPi / mode_strength(n, ka, arr.rigid);
        const double mag = std::abs(g);
        if (!std::isfinite(mag)) {
          g = std::polar(max_gain, 0.0);
        } else if (mag > max_gain) {
          g *= max_gain / mag;
        }
      }
      eq[static_cast<std::size_t>(n) * spec.bins() + k] = g;
    }
  }
  for (int n = 0; n <= order; ++n) {
    const auto* gains = eq.data() + static_cast<std::size_t>(n) * spec.bins();
    for (int m = -n; m <= n; ++m) {
      const std::size_t c = acn(n, m);
      for (std::size_t t = 0; t < spec.frames(); ++t) {
        auto fr = out.frame(c, t);
        kern.complex_multiply(fr.data(), gains, spec.bins(), fr.data());
      }
    }
  }
  return out;
}

std::size_t DoaField::valid_count() const {
  return static_cast<std::size_t>(
      std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

DoaField piv_doa_field(const ShdSpectrogram& shd,
                       std::span<const std::size_t> band, double energy_floor) {
  if (shd.order() < 1) {
    throw Error("pseudo-intensity needs first-order SH coefficients");
  }
  const std::size_t bins = shd.bins();
  const std::size_t frames = shd.frames();
  for (std::size_t k : band) {
    if (k >= bins) throw Error("band bin index out of range");
  }
  DoaField field;
  field.bins = bins;
  field.frames = frames;
  field.u.assign(bins * frames, UnitVec3{});
  field.valid.assign(bins * frames, 0);
  field.band.assign(band.begin(), band.end());

  const auto& kern = kernels::active();
  std::vector<double> ix(bins), iy(bins), iz(bins), norms(bins), sorted;
  for (std::size_t t = 0; t < frames; ++t) {
    kern.pseudo_intensity(shd.frame(0, t).data(), shd.frame(acn(1, 1), t).data(),
                          shd.frame(acn(1, -1), t).data(),
                          shd.frame(acn(1, 0), t).data(), bins, ix.data(),
                          iy.data(), iz.data());
    sorted.clear();
    for (std::size_t k : band) {
      norms[k] = std::sqrt(ix[k] * ix[k] + iy[k] * iy[k] + iz[k] * iz[k]);
      if (std::isfinite(norms[k])) sorted.push_back(norms[k]);
    }
    if (sorted.empty()) continue;
    const std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
    double median = sorted[mid];
    if (sorted.size() % 2 == 0) {
      const double lower = *std::max_element(sorted.begin(), sorted.begin() + mid);
      median = 0.5 * (lower + median);
    }
    const double threshold = energy_floor * median;
    for (std::size_t k : band) {
      const double n = norms[k];
      if (!(n > 0.0) || !std::isfinite(n) || n < threshold) continue;
      const std::size_t idx = field.index(k, t);
      field.u[idx] = UnitVec3::raw(ix[k] / n, iy[k] / n, iz[k] / n);
      field.valid[idx] = 1;
    }
  }
  return field;
}

}  // namespace sphdoa
