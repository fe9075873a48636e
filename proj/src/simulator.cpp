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

#include "sphdoa/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fft.hpp"
#include "sphdoa/kernels.hpp"
#include "sphdoa/special.hpp"

namespace sphdoa {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

// Extra RIR length beyond the latest arrival, covering the sphere's
// scattering response.
constexpr std::size_t kRirTailSamples = 512;
constexpr std::size_t kPhasorBlock = 32;

// exp(-i * step * f) for f = 0..n-1 without accumulating rotation error.
void delay_phasor(double step, std::size_t n, std::vector<cplx>& coarse,
                  std::vector<cplx>& fine, std::vector<cplx>& out) {
  fine.resize(kPhasorBlock);
  coarse.resize((n + kPhasorBlock - 1) / kPhasorBlock);
  for (std::size_t j = 0; j < kPhasorBlock; ++j) {
    fine[j] = std::polar(1.0, -step * static_cast<double>(j));
  }
  for (std::size_t b = 0; b < coarse.size(); ++b) {
    coarse[b] = std::polar(1.0, -step * static_cast<double>(b * kPhasorBlock));
  }
  out.resize(n);
  kernels::active().phasor_fill(coarse.data(), fine.data(), kPhasorBlock, n,
                                out.data());
}

std::size_t rir_length(std::span<const ImageSource> images_rel, double speed,
                       double fs, double radius) {
  double far = 0.0;
  for (const auto& im : images_rel) far = std::max(far, im.position.norm());
  const auto latest =
      static_cast<std::size_t>(std::ceil((far + radius) / speed * fs));
  return fft::next_pow2(latest + kRirTailSamples);
}

void check_outside_sphere(std::span<const ImageSource> images_rel,
                          double radius) {
  for (const auto& im : images_rel) {
    if (!(im.position.norm() > radius)) {
      throw Error("source lies inside the array sphere");
    }
  }
}

std::vector<ImageSource> relative_to(std::span<const ImageSource> images,
                                     const Vec3& center) {
  std::vector<ImageSource> rel(images.begin(), images.end());
  for (auto& im : rel) im.position = im.position - center;
  return rel;
}

// Zero-padded linear convolution of `signal` with each row of `rirs`,
// truncated to the signal length, accumulated into `out` channels.
void convolve_into(std::span<const double> signal,
                   const std::vector<std::vector<double>>& rirs,
                   MultichannelSignal& out) {
  const std::size_t len = signal.size();
  const std::size_t rir_len = rirs.empty() ? 0 : rirs.front().size();
  const std::size_t n = fft::next_pow2(len + rir_len);
  const std::size_t bins = n / 2 + 1;
  std::vector<double> buf(n, 0.0);
  std::copy(signal.begin(), signal.end(), buf.begin());
  std::vector<cplx> sig_spec(bins), rir_spec(bins);
  fft::forward(buf, sig_spec);
  const auto& kern = kernels::active();
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < rirs.size(); ++c) {
    std::fill(buf.begin(), buf.end(), 0.0);
    std::copy(rirs[c].begin(), rirs[c].end(), buf.begin());
    fft::forward(buf, rir_spec);
    kern.complex_multiply(rir_spec.data(), sig_spec.data(), bins,
                          rir_spec.data());
    fft::inverse(rir_spec, buf);
    auto dst = out.channel(c);
    for (std::size_t t = 0; t < len; ++t) dst[t] += buf[t] * scale;
  }
}

std::vector<std::vector<double>> to_impulse_responses(
    std::vector<std::vector<cplx>>& spectra, std::size_t nfft) {
  std::vector<std::vector<double>> rirs(spectra.size(),
                                        std::vector<double>(nfft));
  const double scale = 1.0 / static_cast<double>(nfft);
  for (std::size_t c = 0; c < spectra.size(); ++c) {
    auto& h = spectra[c];
    h.front() = 0.0;
    h.back() = {h.back().real(), 0.0};
    fft::inverse(h, rirs[c]);
    for (double& v : rirs[c]) v *= scale;
  }
  return rirs;
}

}  // namespace

double t60_to_reflection(const RoomSpec& room) {
  if (!(room.t60 > 0.0)) {
    throw Error("reflection coefficient needs t60 > 0 (t60 = 0 is anechoic)");
  }
  const Vec3& d = room.dims;
  const double volume = d.x * d.y * d.z;
  const double area = 2.0 * (d.x * d.y + d.x * d.z + d.y * d.z);
  const double sabine = 0.161 * volume / (room.t60 * area);
  double alpha = sabine;
  if (room.absorption == AbsorptionModel::kEyring) {
    alpha = 1.0 - std::exp(-sabine);
  }
  if (alpha >= 1.0) throw Error("room cannot achieve requested T60");
  return std::clamp(std::sqrt(1.0 - alpha), 0.0, std::nextafter(1.0, 0.0));
}

std::vector<ImageSource> image_sources(const RoomSpec& room, const Vec3& src,
                                       const Vec3& array_center,
                                       double reflection,
                                       const ImageLimits& limits) {
  if (limits.max_order < 0) throw Error("max image order must be >= 0");
  const double dims[3] = {room.dims.x, room.dims.y, room.dims.z};
  const double s[3] = {src.x, src.y, src.z};
  const double max_dist = limits.max_delay * room.speed_of_sound;
  // Per-axis order of (n, q) is |n - q| + |n|, at least 2|n| - 1.
  const int nmax = limits.max_order / 2 + 1;

  std::vector<ImageSource> out{{src, 1.0, 0}};
  for (int nx = -nmax; nx <= nmax; ++nx) {
    for (int qx = 0; qx <= 1; ++qx) {
      const int ox = std::abs(nx - qx) + std::abs(nx);
      if (ox > limits.max_order) continue;
      for (int ny = -nmax; ny <= nmax; ++ny) {
        for (int qy = 0; qy <= 1; ++qy) {
          const int oy = std::abs(ny - qy) + std::abs(ny);
          if (ox + oy > limits.max_order) continue;
          for (int nz = -nmax; nz <= nmax; ++nz) {
            for (int qz = 0; qz <= 1; ++qz) {
              const int oz = std::abs(nz - qz) + std::abs(nz);
              const int order = ox + oy + oz;
              if (order == 0 || order > limits.max_order) continue;
              const int n[3] = {nx, ny, nz};
              const int q[3] = {qx, qy, qz};
              double p[3];
              for (int a = 0; a < 3; ++a) {
                p[a] = (q[a] ? -s[a] : s[a]) + 2.0 * n[a] * dims[a];
              }
              const Vec3 pos{p[0], p[1], p[2]};
              if ((pos - array_center).norm() > max_dist) continue;
              out.push_back({pos, std::pow(reflection, order), order});
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<ImageSource> scenario_images(const RoomSpec& room, const Vec3& src,
                                         const Vec3& array_center,
                                         ImageLimits limits) {
  if (room.t60 <= 0.0) return {{src, 1.0, 0}};
  if (!std::isfinite(limits.max_delay)) limits.max_delay = 1.5 * room.t60;
  return image_sources(room, src, array_center, t60_to_reflection(room), limits);
}

void validate(const ScenarioSpec& sc) {
  const Vec3& d = sc.room.dims;
  if (!(d.x > 0 && d.y > 0 && d.z > 0)) throw Error("room dims must be > 0");
  if (sc.room.t60 < 0.0) throw Error("t60 must be >= 0");
  auto inside = [&](const Vec3& p) {
    return p.x > 0 && p.x < d.x && p.y > 0 && p.y < d.y && p.z > 0 && p.z < d.z;
  };
  if (!inside(sc.array_center)) throw Error("array center lies outside the room");
  if (sc.sources.empty()) throw Error("scenario has no sources");
  for (const auto& s : sc.sources) {
    if (!inside(s.position)) throw Error("source lies outside the room");
    if (!((s.position - sc.array_center).norm() > sc.array.radius)) {
      throw Error("source lies inside the array sphere");
    }
    if (s.signal.size() != sc.sources.front().signal.size()) {
      throw Error("source signals differ in length");
    }
  }
}

int render_truncation_order(double ka_max, bool rigid) {
  constexpr int kCap = 40;
  std::vector<double> terms;
  double peak = 0.0;
  for (int n = 0; n <= kCap; ++n) {
    const double t = (2.0 * n + 1.0) * std::abs(mode_strength(n, ka_max, rigid));
    terms.push_back(t);
    peak = std::max(peak, t);
  }
  int order = 0;
  for (int n = 0; n <= kCap; ++n) {
    if (terms[static_cast<std::size_t>(n)] >= 1e-6 * peak) order = n;
  }
  return std::min(order + 1, kCap);
}

std::vector<std::vector<cplx>> array_transfer(
    const ArraySpec& arr, std::span<const ImageSource> images_rel,
    double speed_of_sound, double sample_rate, std::size_t nfft) {
  check_outside_sphere(images_rel, arr.radius);
  const std::size_t bins = nfft / 2 + 1;
  const double dk = 2.0 * kPi * sample_rate / (static_cast<double>(nfft) * speed_of_sound);
  const double ka_max = dk * static_cast<double>(bins - 1) * arr.radius;
  const int order = render_truncation_order(ka_max, arr.rigid);
  const std::size_t nsh = sh_channel_count(order);
  const auto no = static_cast<std::size_t>(order + 1);
  const auto& kern = kernels::active();

  // Room response in the SH domain, before the sphere's boundary factor:
  // A_nm(f) = sum_i g_i Y_nm(dir_i) h_n(k r_i).
  std::vector<std::vector<cplx>> acc(nsh, std::vector<cplx>(bins));
  std::vector<double> y(nsh);
  std::vector<cplx> coarse, fine, phasor, rho(no);
  std::vector<std::vector<cplx>> q(no, std::vector<cplx>(bins));
  for (const auto& im : images_rel) {
    const double r = im.position.norm();
    sh_basis(UnitVec3(im.position), order, y);
    delay_phasor(dk * r, bins, coarse, fine, phasor);
    for (std::size_t f = 1; f < bins; ++f) {
      special::sph_h_reduced(dk * static_cast<double>(f) * r, rho);
      for (std::size_t n = 0; n < no; ++n) q[n][f] = rho[n] * im.gain;
    }
    for (std::size_t n = 0; n < no; ++n) {
      q[n][0] = 0.0;
      kern.complex_multiply(q[n].data(), phasor.data(), bins, q[n].data());
      const int ni = static_cast<int>(n);
      for (int m = -ni; m <= ni; ++m) {
        const std::size_t c = acn(ni, m);
        kern.axpy_real(y[c], q[n].data(), bins, acc[c].data());
      }
    }
  }

  // Boundary factor D_n(f) = -4 pi i k B_n(ka), B_n the rigid or open
  // surface factor.
  std::vector<std::vector<cplx>> boundary(no, std::vector<cplx>(bins));
  for (std::size_t f = 1; f < bins; ++f) {
    const double k = dk * static_cast<double>(f);
    const double ka = k * arr.radius;
    for (std::size_t n = 0; n < no; ++n) {
      const int ni = static_cast<int>(n);
      const cplx surface = arr.rigid ? special::rigid_surface_factor(ni, ka)
                                     : cplx(special::sph_j(ni, ka), 0.0);
      boundary[n][f] = cplx(0.0, -4.0 * kPi * k) * surface;
    }
  }
  for (std::size_t n = 0; n < no; ++n) {
    const int ni = static_cast<int>(n);
    for (int m = -ni; m <= ni; ++m) {
      auto& a = acc[acn(ni, m)];
      kern.complex_multiply(a.data(), boundary[n].data(), bins, a.data());
    }
  }

  std::vector<std::vector<cplx>> out(arr.capsules.size(),
                                     std::vector<cplx>(bins));
  for (std::size_t m = 0; m < arr.capsules.size(); ++m) {
    sh_basis(dir_to_vec(arr.capsules[m]), order, y);
    for (std::size_t c = 0; c < nsh; ++c) {
      kern.axpy_real(y[c], acc[c].data(), bins, out[m].data());
    }
  }
  return out;
}

MultichannelSignal render_array(
    const ScenarioSpec& sc, const std::vector<std::vector<ImageSource>>& images) {
  validate(sc);
  if (images.size() != sc.sources.size()) {
    throw Error("need one image list per source");
  }
  const std::size_t len = sc.sources.front().signal.size();
  MultichannelSignal out(sc.array.capsules.size(), len, sc.sample_rate);
  for (std::size_t s = 0; s < sc.sources.size(); ++s) {
    const auto rel = relative_to(images[s], sc.array_center);
    check_outside_sphere(rel, sc.array.radius);
    const std::size_t nfft = rir_length(rel, sc.room.speed_of_sound,
                                        sc.sample_rate, sc.array.radius);
    auto spectra = array_transfer(sc.array, rel, sc.room.speed_of_sound,
                                  sc.sample_rate, nfft);
    const auto rirs = to_impulse_responses(spectra, nfft);
    convolve_into(sc.sources[s].signal, rirs, out);
  }
  return out;
}

MultichannelSignal render_shd_direct(
    const ScenarioSpec& sc, const std::vector<std::vector<ImageSource>>& images,
    int order) {
  validate(sc);
  if (images.size() != sc.sources.size()) {
    throw Error("need one image list per source");
  }
  if (order < 0) throw Error("SH order must be non-negative");
  const std::size_t nsh = sh_channel_count(order);
  const std::size_t len = sc.sources.front().signal.size();
  MultichannelSignal out(nsh, len, sc.sample_rate);
  const auto& kern = kernels::active();
  std::vector<double> y(nsh);
  std::vector<cplx> coarse, fine, phasor;
  for (std::size_t s = 0; s < sc.sources.size(); ++s) {
    const auto rel = relative_to(images[s], sc.array_center);
    check_outside_sphere(rel, sc.array.radius);
    const std::size_t nfft = rir_length(rel, sc.room.speed_of_sound,
                                        sc.sample_rate, sc.array.radius);
    const std::size_t bins = nfft / 2 + 1;
    const double dk = 2.0 * kPi * sc.sample_rate /
                      (static_cast<double>(nfft) * sc.room.speed_of_sound);
    std::vector<std::vector<cplx>> acc(nsh, std::vector<cplx>(bins));
    for (const auto& im : rel) {
      if (im.gain == 0.0) continue;
      const double r = im.position.norm();
      sh_basis(UnitVec3(im.position), order, y);
      delay_phasor(dk * r, bins, coarse, fine, phasor);
      const double amp = 4.0 * kPi * im.gain / r;
      for (std::size_t c = 0; c < nsh; ++c) {
        kern.axpy_real(amp * y[c], phasor.data(), bins, acc[c].data());
      }
    }
    const auto rirs = to_impulse_responses(acc, nfft);
    convolve_into(sc.sources[s].signal, rirs, out);
  }
  return out;
}

double mean_power(const MultichannelSignal& sig) {
  double total = 0.0;
  for (double v : sig.samples()) total += v * v;
  const auto n = static_cast<double>(sig.samples().size());
  return n > 0 ? total / n : 0.0;
}

MultichannelSignal white_noise(std::size_t channels, std::size_t length,
                               double sample_rate, double power,
                               std::uint64_t seed) {
  MultichannelSignal noise(channels, length, sample_rate);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : noise.samples()) v = gauss(rng);
  const double realized = mean_power(noise);
  if (realized > 0.0) {
    const double scale = std::sqrt(power / realized);
    for (double& v : noise.samples()) v *= scale;
  }
  return noise;
}

MultichannelSignal add_noise_snr(const MultichannelSignal& sig, double snr_db,
                                 std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0) return sig;
  const double p_sig = mean_power(sig);
  if (!(p_sig > 0.0)) throw Error("cannot set the SNR of a silent signal");
  const double p_noise = p_sig / std::pow(10.0, snr_db / 10.0);
  MultichannelSignal out = white_noise(sig.channels(), sig.length(),
                                       sig.sample_rate(), p_noise, seed);
  for (std::size_t i = 0; i < out.samples().size(); ++i) {
    out.samples()[i] += sig.samples()[i];
  }
  return out;
}

}  // namespace sphdoa
