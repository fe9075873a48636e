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

// Trial and benchmark orchestration: source placement, rendering, the
// STFT -> SH -> PIV -> weighting -> top-P% -> k-means chain, error scoring,
// and the spacing sweep with median aggregation.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sphdoa/ec.hpp"
#include "sphdoa/geometry.hpp"
#include "sphdoa/shd.hpp"
#include "sphdoa/simulator.hpp"
#include "sphdoa/tf_analysis.hpp"

namespace sphdoa {

enum class RenderPath { kShdDirect, kArray };

struct TrialConfig {
  // Scenario.
  RoomSpec room;
  Vec3 array_center{2.5, 3.0, 2.0};
  double array_radius = 0.042;
  bool rigid = true;
  double snr_db = 20.0;  // +inf disables noise
  int sources = 2;
  double spacing_deg = 90.0;
  double source_distance = 1.0;  // radius of the source circle, m
  double duration = 3.0;         // s, about one read sentence
  double sample_rate = 16000.0;
  std::uint64_t seed = 1;
  int max_image_order = 20;
  double max_delay = 0.0;  // s, 0 = 1.5 * t60
  RenderPath render = RenderPath::kShdDirect;
  std::vector<std::string> source_wavs;  // replaces synthetic sources

  // Processing.
  StftParams stft;
  double band_lo = 200.0;
  double band_hi = 4000.0;
  int order = 1;
  double max_gain_db = 20.0;
  double energy_floor = 1e-6;
  double p_percent = 5.0;
  Scheme scheme = Scheme::kEC3;
  EcOptions ec;
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
};

void validate(const TrialConfig& cfg);

// SplitMix64 of (seed, stream); used for every derived RNG stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct TrialScene {
  ScenarioSpec scenario;
  std::vector<UnitVec3> truth;  // from the array center
  double rotation = 0.0;        // rad, azimuth of source 0
};

// Sources on a horizontal circle around the array center, source s at
// azimuth rotation + s * spacing, rotation drawn from the trial seed.
TrialScene build_scene(const TrialConfig& cfg);

// Scene placed at an explicit rotation instead of a seeded one.
TrialScene build_scene(const TrialConfig& cfg, double rotation);

// Renders the scene with noise and returns its SH spectrogram.
ShdSpectrogram render_scene_shd(const TrialConfig& cfg, const TrialScene& scene);

// Capsule signals (array path) with noise; used by `simulate`.
MultichannelSignal render_scene_capsules(const TrialConfig& cfg,
                                         const TrialScene& scene);

// Capsule recording -> DOA field.
DoaField analyze_capsules(const TrialConfig& cfg, const MultichannelSignal& sig);
DoaField analyze_shd(const TrialConfig& cfg, const ShdSpectrogram& shd);

// Weighted top-P% subsample clustered into `sources` directions.
std::vector<UnitVec3> estimate_doas(const DoaField& field,
                                    const EcAnalysis& analysis, Scheme scheme,
                                    const TrialConfig& cfg);

struct TrialReport {
  Scheme scheme = Scheme::kEC;
  std::uint64_t seed = 0;
  std::vector<SphDirection> estimated;  // matched to truth order
  std::vector<SphDirection> truth;
  std::vector<double> errors_deg;
  double mean_error_deg = 0.0;
  double seconds = 0.0;
};

TrialReport run_trial(const TrialConfig& cfg);

// All schemes on one rendering, in the order given.
std::vector<TrialReport> run_trial_schemes(const TrialConfig& cfg,
                                           std::span<const Scheme> schemes);

// Mean of the two middle values for even counts. Throws on empty input.
double median(std::vector<double> xs);

struct BenchmarkConfig {
  TrialConfig base;
  std::vector<double> spacings{10.0, 30.0, 60.0, 90.0};
  std::size_t trials = 20;
  std::vector<Scheme> schemes{Scheme::kEC, Scheme::kEC1, Scheme::kEC2,
                              Scheme::kEC3};
  std::size_t threads = 0;  // 0 = hardware concurrency; SPHDOA_THREADS caps it
};

struct BenchmarkCell {
  Scheme scheme = Scheme::kEC;
  double spacing_deg = 0.0;
  double median_error_deg = 0.0;
  std::size_t trials = 0;  // configured
  std::size_t failed = 0;  // excluded from the median
  std::uint64_t seed = 0;
};

struct BenchmarkReport {
  std::string version;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<BenchmarkCell> cells;  // scheme-major, spacings in config order

  bool operator==(const BenchmarkReport&) const = default;
};

inline bool operator==(const BenchmarkCell& a, const BenchmarkCell& b) {
  return a.scheme == b.scheme && a.spacing_deg == b.spacing_deg &&
         a.median_error_deg == b.median_error_deg && a.trials == b.trials &&
         a.failed == b.failed && a.seed == b.seed;
}

using LogFn = std::function<void(const std::string&)>;

// Trial i of every spacing and scheme uses seed derive_seed(base.seed, i).
// Failed trials are logged and excluded; more than 20% failures in any cell
// throws.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const LogFn& log = {});

// requested (0 = hardware concurrency), capped by SPHDOA_THREADS when set.
std::size_t worker_count(std::size_t requested);

}  // namespace sphdoa
