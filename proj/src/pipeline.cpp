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


#include "sphdoa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

#include "sphdoa/clustering.hpp"
#include "sphdoa/config.hpp"
#include "sphdoa/wav.hpp"

namespace sphdoa {

namespace {

// Stream identifiers for derive_seed within one trial.
constexpr std::uint64_t kPlacementStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kClusterStream = 3;
constexpr std::uint64_t kSourceStream = 100;

ArraySpec array_of(const TrialConfig& cfg) {
  return ArraySpec::pentakis_dodecahedron(cfg.array_radius, cfg.rigid);
}

EncoderParams encoder_of(const TrialConfig& cfg) {
  return {cfg.order, cfg.max_gain_db, cfg.room.speed_of_sound};
}

std::vector<std::vector<double>> source_signals(const TrialConfig& cfg) {
  const auto count = static_cast<std::size_t>(cfg.sources);
  std::vector<std::vector<double>> out;
  if (cfg.source_wavs.empty()) {
    for (std::size_t s = 0; s < count; ++s) {
      out.push_back(gen_speechlike(cfg.duration, cfg.sample_rate,
                                   derive_seed(cfg.seed, kSourceStream + s))
                        .samples);
    }
    return out;
  }
  if (cfg.source_wavs.size() < count) {
    throw Error("need " + std::to_string(count) + " source WAV files, got " +
                std::to_string(cfg.source_wavs.size()));
  }
  std::size_t len = std::numeric_limits<std::size_t>::max();
  for (std::size_t s = 0; s < count; ++s) {
    const std::string& path = cfg.source_wavs[s];
    MultichannelSignal w = read_wav(path);
    if (w.channels() != 1) throw Error("'" + path + "' is not mono");
    if (w.sample_rate() != cfg.sample_rate) {
      throw Error("'" + path + "' has sample rate " +
                  std::to_string(static_cast<long>(w.sample_rate())) +
                  " Hz; resampling is not supported");
    }
    auto ch = w.channel(0);
    out.emplace_back(ch.begin(), ch.end());
    len = std::min(len, out.back().size());
  }
  for (auto& sig : out) sig.resize(len);
  return out;
}

std::vector<std::vector<ImageSource>> scene_images(const TrialConfig& cfg,
                                                   const ScenarioSpec& sc) {
  ImageLimits limits;
  limits.max_order = cfg.max_image_order;
  if (cfg.max_delay > 0.0) limits.max_delay = cfg.max_delay;
  std::vector<std::vector<ImageSource>> images;
  for (const auto& s : sc.sources) {
    images.push_back(scenario_images(sc.room, s.position, sc.array_center, limits));
  }
  return images;
}

constexpr const char* kVersion = "0.1.0";

bool noisy(const TrialConfig& cfg) {
  return !(std::isinf(cfg.snr_db) && cfg.snr_db > 0);
}

struct Outcome {
  std::optional<TrialReport> report;
  std::string error;
};

std::vector<Outcome> trial_outcomes(const TrialConfig& cfg,
                                    std::span<const Scheme> schemes) {
  std::vector<Outcome> out(schemes.size());
  const auto start = std::chrono::steady_clock::now();
  std::optional<TrialScene> scene;
  std::optional<DoaField> field;
  try {
    validate(cfg);
    scene = build_scene(cfg);
    field = analyze_shd(cfg, render_scene_shd(cfg, *scene));
  } catch (const std::exception& e) {
    for (auto& o : out) o.error = e.what();
    return out;
  }
  const EcAnalysis analysis(*field, cfg.ec);
  const auto render_done = std::chrono::steady_clock::now();
  const double shared =
      std::chrono::duration<double>(render_done - start).count();

  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto est = estimate_doas(*field, analysis, schemes[i], cfg);
      const SourceMatch m = match_sources(est, scene->truth);
      TrialReport r;
      r.scheme = schemes[i];
      r.seed = cfg.seed;
      double sum = 0.0;
      for (std::size_t s = 0; s < scene->truth.size(); ++s) {
        r.truth.push_back(vec_to_dir(scene->truth[s]));
        r.estimated.push_back(vec_to_dir(est[m.est_index[s]]));
        r.errors_deg.push_back(rad_to_deg(m.errors[s]));
        sum += r.errors_deg.back();
      }
      r.mean_error_deg = sum / static_cast<double>(scene->truth.size());
      r.seconds = shared + std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
      out[i].report = std::move(r);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

}  // namespace

void validate(const TrialConfig& cfg) {
  if (cfg.sources < 1 || cfg.sources > 4) throw Error("sources must be 1-4");
  if (cfg.sources > 1 && !(cfg.spacing_deg > 0.0 && cfg.spacing_deg < 180.0)) {
    throw Error("spacing must lie in (0, 180) degrees");
  }
  if (!(cfg.p_percent > 0.0 && cfg.p_percent <= 100.0)) {
    throw Error("p_percent must lie in (0, 100]");
  }
  if (cfg.order < 1) throw Error("PIV needs SH order >= 1");
  if (!(cfg.duration > 0.0)) throw Error("duration must be > 0");
  if (!(cfg.sample_rate > 0.0)) throw Error("sample rate must be > 0");
  if (!(cfg.source_distance > cfg.array_radius)) {
    throw Error("source circle must lie outside the array sphere");
  }
  if (!(cfg.band_lo < cfg.band_hi)) throw Error("band must satisfy lo < hi");
  if (cfg.restarts < 1) throw Error("restarts must be >= 1");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

TrialScene build_scene(const TrialConfig& cfg) {
  std::mt19937_64 rng(derive_seed(cfg.seed, kPlacementStream));
  std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
  return build_scene(cfg, uni(rng));
}

TrialScene build_scene(const TrialConfig& cfg, double rotation) {
  validate(cfg);
  TrialScene scene;
  scene.rotation = rotation;
  ScenarioSpec& sc = scene.scenario;
  sc.room = cfg.room;
  sc.array_center = cfg.array_center;
  sc.array = array_of(cfg);
  sc.sample_rate = cfg.sample_rate;
  sc.snr_db = cfg.snr_db;
  sc.seed = cfg.seed;
  sc.limits.max_order = cfg.max_image_order;
  if (cfg.max_delay > 0.0) sc.limits.max_delay = cfg.max_delay;

  auto signals = source_signals(cfg);
  for (int s = 0; s < cfg.sources; ++s) {
    const double az = rotation + s * deg_to_rad(cfg.spacing_deg);
    const Vec3 offset{cfg.source_distance * std::cos(az),
                      cfg.source_distance * std::sin(az), 0.0};
    for (const auto& prev : sc.sources) {
      if (((prev.position - cfg.array_center) - offset).norm() < 1e-9) {
        throw Error("sources coincide at this spacing");
      }
    }
    sc.sources.push_back(
        {cfg.array_center + offset, std::move(signals[static_cast<std::size_t>(s)])});
    scene.truth.emplace_back(offset);
  }
  validate(sc);
  return scene;
}

MultichannelSignal render_scene_capsules(const TrialConfig& cfg,
                                         const TrialScene& scene) {
  const auto images = scene_images(cfg, scene.scenario);
  MultichannelSignal caps = render_array(scene.scenario, images);
  if (!noisy(cfg)) return caps;
  return add_noise_snr(caps, cfg.snr_db, derive_seed(cfg.seed, kNoiseStream));
}

ShdSpectrogram render_scene_shd(const TrialConfig& cfg, const TrialScene& scene) {
  const ArraySpec arr = array_of(cfg);
  if (cfg.render == RenderPath::kArray) {
    return encode_shd(stft(render_scene_capsules(cfg, scene), cfg.stft), arr,
                      encoder_of(cfg));
  }
  const auto images = scene_images(cfg, scene.scenario);
  const MultichannelSignal sh =
      render_shd_direct(scene.scenario, images, cfg.order);
  ShdSpectrogram out(cfg.order, stft(sh, cfg.stft));
  if (!noisy(cfg)) return out;

  // Sensor noise at the requested SNR relative to the pressure at the array
  // center, pushed through the same encoder a capsule recording would see.
  double p_center = 0.0;
  for (double v : sh.channel(0)) p_center += v * v;
  p_center /= 4.0 * std::numbers::pi * static_cast<double>(sh.length());
  if (!(p_center > 0.0)) throw Error("cannot set the SNR of a silent signal");
  const MultichannelSignal noise = white_noise(
      arr.capsules.size(), sh.length(), cfg.sample_rate,
      p_center / std::pow(10.0, cfg.snr_db / 10.0),
      derive_seed(cfg.seed, kNoiseStream));
  const ShdSpectrogram enc =
      encode_shd(stft(noise, cfg.stft), arr, encoder_of(cfg));
  auto& dst = out.data();
  const auto& src = enc.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

DoaField analyze_shd(const TrialConfig& cfg, const ShdSpectrogram& shd) {
  const auto band = band_mask(shd, cfg.band_lo, cfg.band_hi);
  return piv_doa_field(shd, band, cfg.energy_floor);
}

DoaField analyze_capsules(const TrialConfig& cfg, const MultichannelSignal& sig) {
  const ArraySpec arr = array_of(cfg);
  if (sig.channels() != arr.capsules.size()) {
    throw Error("recording has " + std::to_string(sig.channels()) +
                " channels, the array has " +
                std::to_string(arr.capsules.size()));
  }
  return analyze_shd(cfg, encode_shd(stft(sig, cfg.stft), arr, encoder_of(cfg)));
}

std::vector<UnitVec3> estimate_doas(const DoaField& field,
                                    const EcAnalysis& analysis, Scheme scheme,
                                    const TrialConfig& cfg) {
  const auto clusters = static_cast<std::size_t>(cfg.sources);
  if (field.valid_count() < clusters) throw Error("insufficient weighted support");
  const auto picked =
      subsample_top_p(field, analysis.weights(scheme), cfg.p_percent);
  if (picked.size() < clusters) throw Error("insufficient weighted support");
  KMeansParams km;
  km.clusters = clusters;
  km.seed = derive_seed(cfg.seed, kClusterStream);
  km.restarts = cfg.restarts;
  km.max_iter = cfg.max_iter;
  return spherical_kmeans(picked, km).centroids;
}

TrialReport run_trial(const TrialConfig& cfg) {
  const Scheme one[] = {cfg.scheme};
  return run_trial_schemes(cfg, one).front();
}

std::vector<TrialReport> run_trial_schemes(const TrialConfig& cfg,
                                           std::span<const Scheme> schemes) {
  std::vector<TrialReport> out;
  for (auto& o : trial_outcomes(cfg, schemes)) {
    if (!o.report) throw Error(o.error);
    out.push_back(std::move(*o.report));
  }
  return out;
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw Error("median of an empty set");
  const std::size_t n = xs.size();
  const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), mid);
  return 0.5 * (lower + upper);
}

std::size_t worker_count(std::size_t requested) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPHDOA_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = std::min<std::size_t>(n, v);
  }
  return n;
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const LogFn& log) {
  if (cfg.trials < 1) throw Error("trials must be >= 1");
  if (cfg.spacings.empty()) throw Error("no spacings given");
  if (cfg.schemes.empty()) throw Error("no schemes given");
  for (double sp : cfg.spacings) {
    TrialConfig probe = cfg.base;
    probe.spacing_deg = sp;
    validate(probe);
  }

  const std::size_t ns = cfg.spacings.size();
  const std::size_t tasks = ns * cfg.trials;
  // results[(spacing * trials + trial) * schemes + scheme]
  std::vector<Outcome> results(tasks * cfg.schemes.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto worker = [&] {
    for (std::size_t task = next++; task < tasks; task = next++) {
      const std::size_t si = task / cfg.trials;
      const std::size_t ti = task % cfg.trials;
      TrialConfig tc = cfg.base;
      tc.spacing_deg = cfg.spacings[si];
      tc.seed = derive_seed(cfg.base.seed, ti);
      auto outs = trial_outcomes(tc, cfg.schemes);
      for (std::size_t k = 0; k < outs.size(); ++k) {
        if (!outs[k].report && log) {
          std::lock_guard lock(log_mu);
          log("trial " + std::to_string(ti) + " spacing " +
              format_double(cfg.spacings[si]) + " scheme " +
              to_string(cfg.schemes[k]) + " failed: " + outs[k].error);
        }
        results[task * cfg.schemes.size() + k] = std::move(outs[k]);
      }
    }
  };
  const std::size_t nthreads = std::min(worker_count(cfg.threads), tasks);
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  BenchmarkReport rep;
  rep.version = kVersion;
  rep.config = config_entries(cfg);
  for (std::size_t k = 0; k < cfg.schemes.size(); ++k) {
    for (std::size_t si = 0; si < ns; ++si) {
      BenchmarkCell cell;
      cell.scheme = cfg.schemes[k];
      cell.spacing_deg = cfg.spacings[si];
      cell.trials = cfg.trials;
      cell.seed = cfg.base.seed;
      std::vector<double> errs;
      for (std::size_t ti = 0; ti < cfg.trials; ++ti) {
        const auto& o = results[(si * cfg.trials + ti) * cfg.schemes.size() + k];
        if (o.report) {
          errs.push_back(o.report->mean_error_deg);
        } else {
          ++cell.failed;
        }
      }
      if (cell.failed * 5 > cfg.trials) {
        throw Error(std::to_string(cell.failed) + " of " +
                    std::to_string(cfg.trials) + " trials failed for scheme " +
                    to_string(cell.scheme) + " at spacing " +
                    format_double(cell.spacing_deg));
      }
      cell.median_error_deg = median(std::move(errs));
      rep.cells.push_back(cell);
    }
  }
  return rep;
}

}  // namespace sphdoa
