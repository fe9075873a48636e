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


// sphdoa command-line front end: simulate, estimate, bench.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sphdoa/config.hpp"
#include "sphdoa/pipeline.hpp"
#include "sphdoa/wav.hpp"

namespace {

using namespace sphdoa;

constexpr int kUsage = 1;
constexpr int kRuntime = 2;

BenchmarkConfig base_config(const std::string& path) {
  return path.empty() ? BenchmarkConfig{} : load_config(path);
}

int cmd_simulate(const std::string& config, const std::string& out,
                 const std::string& seed) {
  BenchmarkConfig cfg = base_config(config);
  if (!seed.empty()) apply_setting(cfg, "seed", seed);
  const TrialScene scene = build_scene(cfg.base);
  write_wav(out, render_scene_capsules(cfg.base, scene));
  nlohmann::ordered_json j;
  j["out"] = out;
  j["sources"] = nlohmann::ordered_json::array();
  for (const auto& u : scene.truth) {
    const SphDirection d = vec_to_dir(u);
    j["sources"].push_back({{"azimuth_deg", rad_to_deg(d.azimuth)},
                            {"inclination_deg", rad_to_deg(d.inclination)}});
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_estimate(const std::string& config, const std::string& in,
                 const std::string& scheme, const std::string& sources,
                 const std::string& p, const std::string& band) {
  BenchmarkConfig cfg = base_config(config);
  if (!scheme.empty()) apply_setting(cfg, "scheme", scheme);
  if (!sources.empty()) apply_setting(cfg, "sources", sources);
  if (!p.empty()) apply_setting(cfg, "p_percent", p);
  if (!band.empty()) apply_setting(cfg, "band", band);
  const MultichannelSignal sig = read_wav(in);
  TrialConfig& t = cfg.base;
  t.sample_rate = sig.sample_rate();
  validate(t);
  const DoaField field = analyze_capsules(t, sig);
  const EcAnalysis analysis(field, t.ec);
  const auto doas = estimate_doas(field, analysis, t.scheme, t);
  nlohmann::ordered_json j;
  j["scheme"] = to_string(t.scheme);
  j["doas"] = nlohmann::ordered_json::array();
  for (const auto& u : doas) {
    const SphDirection d = vec_to_dir(u);
    j["doas"].push_back({{"azimuth_deg", rad_to_deg(d.azimuth)},
                         {"inclination_deg", rad_to_deg(d.inclination)}});
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_bench(const std::string& config, const std::string& spacings,
              const std::string& trials, const std::string& schemes,
              const std::string& out, const std::string& seed) {
  BenchmarkConfig cfg = base_config(config);
  if (!spacings.empty()) apply_setting(cfg, "spacings", spacings);
  if (!trials.empty()) apply_setting(cfg, "trials", trials);
  if (!schemes.empty()) apply_setting(cfg, "schemes", schemes);
  if (!seed.empty()) apply_setting(cfg, "seed", seed);
  const BenchmarkReport rep =
      run_benchmark(cfg, [](const std::string& msg) { std::cerr << msg << "\n"; });
  emit_report(rep, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-source DOA estimation for spherical microphone arrays"};
  app.require_subcommand(1);

  std::string config, out, in, scheme, sources, p, band, spacings, trials,
      schemes, seed;

  auto* sim = app.add_subcommand("simulate", "render a scenario to a 32-channel WAV");
  sim->add_option("--config", config, "config file");
  sim->add_option("--out", out, "output WAV")->required();
  sim->add_option("--seed", seed, "scenario seed");

  auto* est = app.add_subcommand("estimate", "estimate DOAs from a 32-channel WAV");
  est->add_option("--config", config, "config file");
  est->add_option("--in", in, "input WAV")->required();
  est->add_option("--scheme", scheme, "ec, ec1, ec2 or ec3");
  est->add_option("--sources", sources, "number of sources");
  est->add_option("--p", p, "percentage of TF points kept");
  est->add_option("--band", band, "analysis band LO:HI in Hz");

  auto* bench = app.add_subcommand("bench", "run the spacing sweep");
  bench->add_option("--config", config, "config file");
  bench->add_option("--spacings", spacings, "comma-separated spacings in degrees");
  bench->add_option("--trials", trials, "trials per spacing");
  bench->add_option("--schemes", schemes, "comma-separated schemes");
  bench->add_option("--out", out, "report path (.csv or .json)")->required();
  bench->add_option("--seed", seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config, out, seed);
    if (est->parsed()) return cmd_estimate(config, in, scheme, sources, p, band);
    return cmd_bench(config, spacings, trials, schemes, out, seed);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
