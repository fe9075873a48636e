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
#include <set>
#include <tuple>

#include "doctest.h"
#include "sphdoa/shd.hpp"
#include "sphdoa/simulator.hpp"
#include "testgen.hpp"

using namespace sphdoa;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> white(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

ScenarioSpec one_source(const Vec3& pos, std::vector<double> sig, double t60) {
  ScenarioSpec sc;
  sc.room.t60 = t60;
  sc.sources.push_back({pos, std::move(sig)});
  return sc;
}

std::vector<std::vector<ImageSource>> images_for(const ScenarioSpec& sc,
                                                 ImageLimits lim = {}) {
  std::vector<std::vector<ImageSource>> out;
  for (const auto& s : sc.sources) {
    out.push_back(scenario_images(sc.room, s.position, sc.array_center, lim));
  }
  return out;
}

double max_abs_diff(const MultichannelSignal& a, const MultichannelSignal& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) {
    m = std::max(m, std::abs(a.samples()[i] - b.samples()[i]));
  }
  return m;
}

double peak_abs(const MultichannelSignal& a) {
  double m = 0.0;
  for (double v : a.samples()) m = std::max(m, std::abs(v));
  return m;
}

// Number of lattice images with at most n reflections, counted by direct
// enumeration of per-axis mirror indices (|l| reflections along an axis).
std::size_t lattice_count(int n) {
  std::size_t count = 0;
  for (int lx = -n; lx <= n; ++lx) {
    for (int ly = -n; ly <= n; ++ly) {
      for (int lz = -n; lz <= n; ++lz) {
        if (std::abs(lx) + std::abs(ly) + std::abs(lz) <= n) ++count;
      }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("Sabine reflection coefficient") {
  RoomSpec room;
  room.t60 = 0.4;
  const double alpha = 0.161 * 120.0 / (0.4 * 148.0);
  CHECK(alpha == doctest::Approx(0.3264).epsilon(1e-3));
  CHECK(t60_to_reflection(room) == doctest::Approx(std::sqrt(1.0 - alpha)));
  CHECK(t60_to_reflection(room) == doctest::Approx(0.8207).epsilon(1e-4));
  room.t60 = 1e4;
  CHECK(t60_to_reflection(room) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(t60_to_reflection(room) < 1.0);
  room.t60 = 0.1;  // alpha = 1.3
  CHECK_THROWS_WITH_AS(t60_to_reflection(room), "room cannot achieve requested T60", Error);
  room.t60 = 0.0;
  CHECK_THROWS_AS(t60_to_reflection(room), Error);
  room.t60 = 0.4;
  room.absorption = AbsorptionModel::kEyring;
  CHECK(t60_to_reflection(room) == doctest::Approx(std::sqrt(std::exp(-alpha))));
}

TEST_CASE("image source counts and gains") {
  RoomSpec room;
  const Vec3 src{1.0, 2.0, 1.5}, center{2.5, 3.0, 2.0};
  ImageLimits lim;
  lim.max_order = 0;
  auto im = image_sources(room, src, center, 0.8, lim);
  REQUIRE(im.size() == 1);
  CHECK(im[0].position == src);
  CHECK(im[0].gain == 1.0);

  lim.max_order = 1;
  im = image_sources(room, src, center, 0.8, lim);
  REQUIRE(im.size() == 7);
  std::set<std::tuple<double, double, double>> got, want = {
      {1, 2, 1.5},  {-1, 2, 1.5}, {9, 2, 1.5},  {1, -2, 1.5},
      {1, 10, 1.5}, {1, 2, -1.5}, {1, 2, 6.5}};
  for (const auto& i : im) {
    got.insert({i.position.x, i.position.y, i.position.z});
    if (i.order == 1) CHECK(i.gain == doctest::Approx(0.8));
  }
  CHECK(got == want);

  for (int n : {2, 3, 5, 8}) {
    lim.max_order = n;
    im = image_sources(room, src, center, 0.8, lim);
    CHECK(im.size() == lattice_count(n));
    std::set<std::tuple<double, double, double>> uniq;
    for (const auto& i : im) {
      uniq.insert({i.position.x, i.position.y, i.position.z});
      CHECK(i.order <= n);
      CHECK(std::abs(i.gain) <= 1.0);
      CHECK(i.gain == doctest::Approx(std::pow(0.8, i.order)));
    }
    CHECK(uniq.size() == im.size());
  }
  lim.max_order = 3;
  CHECK(image_sources(room, src, center, 0.8, lim).size() == 63);

  // Delay cap keeps only images within reach.
  lim.max_order = 10;
  lim.max_delay = 0.02;
  im = image_sources(room, src, center, 0.8, lim);
  for (const auto& i : im) CHECK((i.position - center).norm() <= 0.02 * 343.0);
  CHECK(im.size() < lattice_count(10));

  RoomSpec anechoic;
  anechoic.t60 = 0.0;
  CHECK(scenario_images(anechoic, src, center, {}).size() == 1);
}

TEST_CASE("open-sphere rendering equals the free field at the capsules") {
  ArraySpec arr = ArraySpec::pentakis_dodecahedron(0.042, false);
  const std::size_t nfft = 2048;
  const Vec3 rel{0.7, -0.4, 0.5};
  const ImageSource im{rel, 1.0, 0};
  const auto h = array_transfer(arr, std::span<const ImageSource>(&im, 1), 343.0,
                                16000.0, nfft);
  const auto caps = arr.capsule_vectors();
  double worst = 0.0;
  for (std::size_t m = 0; m < caps.size(); ++m) {
    const double d = (rel - caps[m].vec() * arr.radius).norm();
    for (std::size_t f = 1; f <= nfft / 2; f += 7) {
      const double k = 2 * kPi * 16000.0 * f / (nfft * 343.0);
      const cd want = std::polar(1.0 / d, -k * d);
      worst = std::max(worst, std::abs(h[m][f] - want) * d);
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("rigid sphere shadows the back and boosts the front") {
  const ArraySpec arr = ArraySpec::pentakis_dodecahedron();
  const Vec3 rel{50.0, 0.0, 0.0};
  const ImageSource im{rel, 1.0, 0};
  const std::size_t nfft = 1024;
  const auto h = array_transfer(arr, std::span<const ImageSource>(&im, 1), 343.0,
                                16000.0, nfft);
  const auto caps = arr.capsule_vectors();
  std::size_t front = 0, back = 0;
  for (std::size_t m = 1; m < caps.size(); ++m) {
    if (caps[m].x() > caps[front].x()) front = m;
    if (caps[m].x() < caps[back].x()) back = m;
  }
  // Low frequency: the sphere is acoustically small.
  CHECK(std::abs(h[front][2]) * 50.0 == doctest::Approx(1.0).epsilon(0.01));
  // ka ~ 4.6 at 6 kHz: near pressure doubling in front, shadow behind.
  const std::size_t k6 = 384;
  CHECK(std::abs(h[front][k6]) * 50.0 > 1.6);
  CHECK(std::abs(h[back][k6]) < std::abs(h[front][k6]));
  const ImageSource inside{Vec3{0.01, 0.0, 0.0}, 1.0, 0};
  const std::span<const ImageSource> bad(&inside, 1);
  CHECK_THROWS_AS(array_transfer(arr, bad, 343.0, 16000.0, nfft), Error);
}

TEST_CASE("truncation order grows with ka and stays capped") {
  CHECK(render_truncation_order(0.1, true) < render_truncation_order(3.0, true));
  CHECK(render_truncation_order(6.2, true) <= 40);
  CHECK(render_truncation_order(6.2, true) >= 10);
}

TEST_CASE("array rendering is linear and superposes sources") {
  const std::size_t len = 4000;
  ScenarioSpec a = one_source({3.5, 3.2, 2.1}, white(len, 1), 0.3);
  a.limits.max_order = 3;
  ScenarioSpec b = one_source({1.9, 2.2, 1.8}, white(len, 2), 0.3);
  b.limits.max_order = 3;
  ImageLimits lim;
  lim.max_order = 3;
  const auto ra = render_array(a, images_for(a, lim));
  const auto rb = render_array(b, images_for(b, lim));
  REQUIRE(ra.channels() == 32);
  REQUIRE(ra.length() == len);

  ScenarioSpec doubled = a;
  for (double& v : doubled.sources[0].signal) v *= 2.0;
  const auto rd = render_array(doubled, images_for(doubled, lim));
  for (std::size_t i = 0; i < ra.samples().size(); ++i) {
    REQUIRE(rd.samples()[i] == 2.0 * ra.samples()[i]);
  }

  ScenarioSpec both = a;
  both.sources.push_back(b.sources[0]);
  const auto rab = render_array(both, images_for(both, lim));
  MultichannelSignal sum = ra;
  for (std::size_t i = 0; i < sum.samples().size(); ++i) sum.samples()[i] += rb.samples()[i];
  CHECK(max_abs_diff(rab, sum) < 1e-10 * peak_abs(sum));

  const auto again = render_array(a, images_for(a, lim));
  CHECK(again.samples() == ra.samples());
}

TEST_CASE("direct SH rendering: ratios, delay, gain and superposition") {
  const std::size_t len = 2048;
  std::vector<double> impulse(len, 0.0);
  impulse[100] = 1.0;
  // 343 m/s, 16 kHz: 1.715 m is exactly 80 samples.
  const Vec3 center{2.5, 3.0, 2.0};
  const UnitVec3 dir(0.6, 0.0, 0.8);
  ScenarioSpec sc = one_source(center + dir.vec() * 1.715, impulse, 0.0);
  const auto sh = render_shd_direct(sc, images_for(sc), 1);
  REQUIRE(sh.channels() == 4);
  std::vector<double> y(4);
  sh_basis(dir, 1, y);
  std::size_t peak = 0;
  for (std::size_t t = 0; t < len; ++t) {
    if (std::abs(sh.channel(0)[t]) > std::abs(sh.channel(0)[peak])) peak = t;
  }
  CHECK(peak == 180);
  CHECK(sh.channel(0)[peak] == doctest::Approx(4 * kPi * y[0] / 1.715).epsilon(1e-3));
  for (std::size_t c = 1; c < 4; ++c) {
    for (std::size_t t = 150; t < 210; ++t) {
      CHECK(sh.channel(c)[t] == doctest::Approx(y[c] / y[0] * sh.channel(0)[t]).epsilon(1e-6).scale(1e-9));
    }
  }

  // zero-gain images change nothing
  auto imgs = images_for(sc);
  imgs[0].push_back({center + Vec3{1.0, 1.0, 0.0}, 0.0, 3});
  CHECK(render_shd_direct(sc, imgs, 1).samples() == sh.samples());

  // superposition with reverberation
  ScenarioSpec a = one_source({3.4, 3.0, 2.0}, white(3000, 3), 0.4);
  ScenarioSpec b = one_source({2.5, 2.1, 2.3}, white(3000, 4), 0.4);
  ScenarioSpec ab = a;
  ab.sources.push_back(b.sources[0]);
  const auto ra = render_shd_direct(a, images_for(a), 2);
  const auto rb = render_shd_direct(b, images_for(b), 2);
  const auto rab = render_shd_direct(ab, images_for(ab), 2);
  MultichannelSignal sum = ra;
  for (std::size_t i = 0; i < sum.samples().size(); ++i) sum.samples()[i] += rb.samples()[i];
  CHECK(max_abs_diff(rab, sum) < 1e-10 * peak_abs(sum));
}

TEST_CASE("anechoic rendering of a source on +x is localized there") {
  const std::size_t len = 8192;
  ScenarioSpec sc = one_source({4.4, 3.0, 2.0}, white(len, 5), 0.0);
  const auto caps = render_array(sc, images_for(sc));
  const auto shd = encode_shd(stft(caps, {}), sc.array, {});
  const auto field = piv_doa_field(shd, band_mask(shd, 200.0, 4000.0));
  std::vector<double> x, y, z;
  for (std::size_t i = 0; i < field.u.size(); ++i) {
    if (!field.valid[i]) continue;
    x.push_back(field.u[i].x());
    y.push_back(field.u[i].y());
    z.push_back(field.u[i].z());
  }
  auto med = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  const SphDirection d = vec_to_dir(UnitVec3(med(x), med(y), med(z)));
  const double az = rad_to_deg(d.azimuth);
  CHECK(std::min(az, 360.0 - az) < 1.0);
  CHECK(rad_to_deg(d.inclination) == doctest::Approx(90.0).epsilon(1.0 / 90.0));
}

TEST_CASE("scenario validation") {
  ScenarioSpec sc = one_source({6.0, 1.0, 1.0}, white(100, 1), 0.0);
  CHECK_THROWS_AS(validate(sc), Error);
  sc.sources[0].position = {2.5, 3.0, 2.01};
  CHECK_THROWS_AS(validate(sc), Error);  // inside the sphere
  sc.sources[0].position = {2.5, 3.0, 2.5};
  CHECK_NOTHROW(validate(sc));
  sc.array_center = {0.0, 3.0, 2.0};
  CHECK_THROWS_AS(validate(sc), Error);
  sc.array_center = {2.5, 3.0, 2.0};
  sc.sources.clear();
  CHECK_THROWS_AS(validate(sc), Error);
}

TEST_CASE("SNR calibration") {
  const auto sl = gen_speechlike(2.0, 16000.0, 3);
  MultichannelSignal sig(4, sl.samples.size(), 16000.0);
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t t = 0; t < sig.length(); ++t) sig.channel(c)[t] = (c + 1) * sl.samples[t];
  }
  const double ps = mean_power(sig);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto noisy = add_noise_snr(sig, 20.0, seed);
    MultichannelSignal noise = noisy;
    for (std::size_t i = 0; i < noise.samples().size(); ++i) {
      noise.samples()[i] -= sig.samples()[i];
    }
    const double snr = 10 * std::log10(ps / mean_power(noise));
    CHECK(std::abs(snr - 20.0) < 0.1);
  }
  const auto n1 = add_noise_snr(sig, 20.0, 1), n2 = add_noise_snr(sig, 20.0, 2);
  CHECK(n1.samples() != n2.samples());
  CHECK(add_noise_snr(sig, 20.0, 1).samples() == n1.samples());
  CHECK(add_noise_snr(sig, std::numeric_limits<double>::infinity(), 1).samples() == sig.samples());
  MultichannelSignal silent(2, 100, 16000.0);
  CHECK_THROWS_AS(add_noise_snr(silent, 20.0, 1), Error);
}

TEST_CASE("speech-like source statistics") {
  double lo = 1.0, hi = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto sl = gen_speechlike(2.0, 16000.0, seed);
    REQUIRE(sl.samples.size() == 32000);
    const double act =
        double(std::count(sl.active.begin(), sl.active.end(), 1)) / sl.active.size();
    lo = std::min(lo, act);
    hi = std::max(hi, act);
    double e = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < sl.samples.size(); ++i) {
      if (sl.active[i]) {
        e += sl.samples[i] * sl.samples[i];
        ++n;
      } else {
        REQUIRE(sl.samples[i] == 0.0);
      }
    }
    CHECK(e / n == doctest::Approx(1.0));
  }
  CHECK(lo >= 0.40);
  CHECK(hi <= 0.70);
  CHECK(gen_speechlike(1.0, 16000.0, 9).samples == gen_speechlike(1.0, 16000.0, 9).samples);
}

TEST_CASE("speech-like spectrum is mostly below 4 kHz") {
  const auto sl = gen_speechlike(3.0, 16000.0, 12);
  MultichannelSignal sig(1, sl.samples.size(), 16000.0);
  sig.samples() = sl.samples;
  const auto spec = stft(sig, {});
  double below = 0.0, total = 0.0;
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    for (std::size_t k = 0; k < spec.bins(); ++k) {
      const double p = std::norm(spec.at(0, k, t));
      total += p;
      if (k * spec.bin_hz() <= 4000.0) below += p;
    }
  }
  CHECK(below / total > 0.9);
}

TEST_CASE("speech-like sources with different seeds are decorrelated") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = gen_speechlike(2.0, 16000.0, seed).samples;
    const auto b = gen_speechlike(2.0, 16000.0, seed + 1000).samples;
    double ea = 0.0, eb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ea += a[i] * a[i];
      eb += b[i] * b[i];
    }
    // Direct cross-correlation over lags up to +-50 ms.
    double peak = 0.0;
    const long n = static_cast<long>(a.size());
    for (long lag = -800; lag <= 800; ++lag) {
      double s = 0.0;
      for (long i = std::max(0L, -lag); i < std::min(n, n - lag); ++i) s += a[i] * b[i + lag];
      peak = std::max(peak, std::abs(s));
    }
    CHECK(peak / std::sqrt(ea * eb) < 0.2);
  }
}
