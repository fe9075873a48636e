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


#include <clocale>
#include <locale>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "sphdoa/clustering.hpp"
#include "sphdoa/config.hpp"
#include "sphdoa/pipeline.hpp"
#include "sphdoa/wav.hpp"

using namespace sphdoa;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TrialConfig quick(double duration = 1.0) {
  TrialConfig c;
  c.duration = duration;
  c.max_image_order = 6;
  return c;
}

bool same_trial(const TrialReport& a, const TrialReport& b) {
  if (a.scheme != b.scheme || a.seed != b.seed || a.errors_deg != b.errors_deg ||
      a.mean_error_deg != b.mean_error_deg || a.estimated.size() != b.estimated.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.estimated.size(); ++i) {
    if (a.estimated[i].azimuth != b.estimated[i].azimuth ||
        a.estimated[i].inclination != b.estimated[i].inclination) {
      return false;
    }
  }
  return true;
}

BenchmarkConfig small_bench() {
  BenchmarkConfig b;
  b.base = quick(0.5);
  b.base.max_image_order = 3;
  b.spacings = {30.0, 90.0};
  b.trials = 3;
  return b;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sphdoa_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SPHDOA_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("anechoic noiseless single source is located") {
  TrialConfig c = quick();
  c.room.t60 = 0.0;
  c.snr_db = kInf;
  c.sources = 1;
  c.scheme = Scheme::kEC;
  const TrialReport r = run_trial(c);
  REQUIRE(r.errors_deg.size() == 1);
  CHECK(r.errors_deg[0] < 2.0);
  CHECK(r.mean_error_deg == r.errors_deg[0]);
}

TEST_CASE("reverberant two-source trial") {
  TrialConfig c = quick();
  c.spacing_deg = 90.0;
  c.scheme = Scheme::kEC3;
  const TrialReport r = run_trial(c);
  REQUIRE(r.errors_deg.size() == 2);
  REQUIRE(r.truth.size() == 2);
  for (double e : r.errors_deg) {
    CHECK(std::isfinite(e));
    CHECK(e >= 0.0);
    CHECK(e <= 180.0);
  }
  // Truth lies on the horizontal circle, 90 degrees apart.
  for (const auto& d : r.truth) CHECK(d.inclination == doctest::Approx(std::numbers::pi / 2));
  const double gap = rad_to_deg(angular_error(dir_to_vec(r.truth[0]), dir_to_vec(r.truth[1])));
  CHECK(gap == doctest::Approx(90.0).epsilon(1e-9));
}

TEST_CASE("trials are deterministic") {
  const TrialConfig c = quick(0.6);
  const Scheme all[] = {Scheme::kEC, Scheme::kEC1, Scheme::kEC2, Scheme::kEC3};
  const auto a = run_trial_schemes(c, all);
  const auto b = run_trial_schemes(c, all);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(same_trial(a[i], b[i]));
    CHECK(a[i].scheme == all[i]);
  }
  // A single-scheme run sees the same rendering.
  TrialConfig one = c;
  one.scheme = Scheme::kEC2;
  CHECK(same_trial(run_trial(one), a[2]));
}

TEST_CASE("rotating the scene rotates the estimates") {
  TrialConfig c = quick();
  c.room.t60 = 0.0;
  c.snr_db = kInf;
  c.spacing_deg = 90.0;
  auto estimate = [&](double rot) {
    const TrialScene sc = build_scene(c, rot);
    const DoaField f = analyze_shd(c, render_scene_shd(c, sc));
    const EcAnalysis an(f, c.ec);
    return std::make_pair(sc.truth, estimate_doas(f, an, Scheme::kEC3, c));
  };
  const auto [ta, ea] = estimate(0.3);
  const auto [tb, eb] = estimate(0.3 + 1.1);
  const auto ma = match_sources(ea, ta), mb = match_sources(eb, tb);
  for (std::size_t i = 0; i < 2; ++i) {
    const double az_a = vec_to_dir(ea[ma.est_index[i]]).azimuth;
    const double az_b = vec_to_dir(eb[mb.est_index[i]]).azimuth;
    double d = std::remainder(az_b - az_a - 1.1, 2 * std::numbers::pi);
    CHECK(std::abs(rad_to_deg(d)) < 2.0);
  }
}

TEST_CASE("capsule rendering agrees with the direct SH path") {
  TrialConfig c = quick();
  c.max_image_order = 2;
  c.spacing_deg = 90.0;
  c.scheme = Scheme::kEC3;
  const TrialReport shd = run_trial(c);
  c.render = RenderPath::kArray;
  const TrialReport arr = run_trial(c);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(shd.errors_deg[i] < 6.0);
    CHECK(arr.errors_deg[i] < 6.0);
    const double d = rad_to_deg(angular_error(dir_to_vec(shd.estimated[i]), dir_to_vec(arr.estimated[i])));
    CHECK(d < 5.0);
  }
}

TEST_CASE("scene construction and validation") {
  TrialConfig c = quick();
  c.sources = 3;
  c.spacing_deg = 30.0;
  const TrialScene s = build_scene(c);
  CHECK(s.truth.size() == 3);
  CHECK(s.scenario.sources.size() == 3);
  CHECK(build_scene(c).rotation == s.rotation);
  c.seed = 2;
  CHECK(build_scene(c).rotation != s.rotation);

  TrialConfig bad = quick();
  bad.sources = 0;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = quick();
  bad.p_percent = 0.0;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = quick();
  bad.source_distance = 5.0;  // leaves the room
  CHECK_THROWS_AS(build_scene(bad), Error);
  bad = quick();
  bad.sources = 2;
  bad.spacing_deg = 360.0;  // coincident
  CHECK_THROWS_AS(build_scene(bad), Error);
}

TEST_CASE("median against a sort oracle") {
  CHECK(median({3.0}) == 3.0);
  CHECK(median({4.0, 1.0}) == 2.5);
  CHECK(median({5.0, 1.0, 3.0}) == 3.0);
  CHECK_THROWS_AS(median({}), Error);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 50);
  for (int n = 1; n < 60; ++n) {
    std::vector<double> xs(n);
    for (double& x : xs) x = u(rng);
    std::vector<double> s = xs;
    std::sort(s.begin(), s.end());
    const double want = n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
    CHECK(median(xs) == want);
  }
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("a one-trial cell equals that trial's mean error") {
  BenchmarkConfig b = small_bench();
  b.trials = 1;
  b.spacings = {60.0};
  b.schemes = {Scheme::kEC1, Scheme::kEC3};
  const BenchmarkReport rep = run_benchmark(b);
  REQUIRE(rep.cells.size() == 2);
  TrialConfig t = b.base;
  t.spacing_deg = 60.0;
  t.seed = derive_seed(b.base.seed, 0);
  const auto trials = run_trial_schemes(t, b.schemes);
  CHECK(rep.cells[0].scheme == Scheme::kEC1);
  CHECK(rep.cells[0].median_error_deg == trials[0].mean_error_deg);
  CHECK(rep.cells[1].median_error_deg == trials[1].mean_error_deg);
  CHECK(rep.cells[0].trials == 1);
  CHECK(rep.cells[0].seed == b.base.seed);
}

TEST_CASE("benchmark is deterministic across runs and thread counts") {
  BenchmarkConfig b = small_bench();
  b.threads = 1;
  const BenchmarkReport one = run_benchmark(b);
  const BenchmarkReport again = run_benchmark(b);
  b.threads = 8;
  const BenchmarkReport eight = run_benchmark(b);
  CHECK(one == again);
  CHECK(report_csv(one) == report_csv(eight));
  CHECK(report_json(one) == report_json(eight));
  REQUIRE(one.cells.size() == 8);
  CHECK(one.cells[0].scheme == Scheme::kEC);
  CHECK(one.cells[1].spacing_deg == 90.0);
}

TEST_CASE("worker count honours the cap") {
  ::setenv("SPHDOA_THREADS", "3", 1);
  CHECK(worker_count(8) == 3);
  CHECK(worker_count(2) == 2);
  ::setenv("SPHDOA_THREADS", "junk", 1);
  CHECK(worker_count(8) == 8);
  ::unsetenv("SPHDOA_THREADS");
  CHECK(worker_count(5) == 5);
  CHECK(worker_count(0) >= 1);
}

TEST_CASE("CSV layout") {
  BenchmarkReport r;
  r.version = "0.1.0";
  for (Scheme s : {Scheme::kEC, Scheme::kEC3}) {
    for (double sp : {10.0, 30.0, 90.0}) {
      r.cells.push_back({s, sp, sp / 7.0, 20, 0, 1});
    }
  }
  const std::string csv = report_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "scheme,spacing_deg,median_error_deg,trials,seed");
  const std::regex row(R"(^ec3?,[0-9]+\.[0-9]{6},[0-9]+\.[0-9]{6},20,1$)");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::regex_match(line, row));
    ++rows;
  }
  CHECK(rows == 6);
  CHECK(csv.find("ec,30.000000,4.285714,20,1\n") != std::string::npos);

  // A comma-decimal global locale must not leak into the report. Few
  // containers ship de_DE, so the facet is installed by hand.
  struct Comma : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
    char do_thousands_sep() const override { return '.'; }
    std::string do_grouping() const override { return "\3"; }
  };
  const std::locale before = std::locale::global(std::locale(std::locale::classic(), new Comma));
  std::ostringstream probe;
  probe << 1.5;
  CHECK(probe.str() == "1,5");
  CHECK(report_csv(r) == csv);
  const std::string json_comma = report_json(r);
  std::locale::global(before);
  CHECK(json_comma == report_json(r));
  for (const char* loc : {"de_DE.UTF-8", "C.UTF-8"}) {
    if (std::setlocale(LC_ALL, loc) != nullptr) CHECK(report_csv(r) == csv);
  }
  std::setlocale(LC_ALL, "C");
}

TEST_CASE("JSON report round trip") {
  BenchmarkConfig b;
  b.trials = 7;
  BenchmarkReport r;
  r.version = "0.1.0";
  r.config = config_entries(b);
  r.cells.push_back({Scheme::kEC2, 60.0, 3.25, 7, 1, 99});
  r.cells.push_back({Scheme::kEC3, 90.0, 0.1 + 0.2, 7, 0, 99});
  const BenchmarkReport back = parse_report_json(report_json(r));
  CHECK(back == r);
  CHECK(report_json(back) == report_json(r));
}

TEST_CASE("config parsing") {
  BenchmarkConfig b;
  apply_settings(b,
                 "# sweep\n"
                 "t60 = 0.6\n"
                 "spacings = 20, 40\n"
                 "schemes = ec1,ec3   # trailing comment\n"
                 "band = 300:3500\n"
                 "\n"
                 "trials=4\n"
                 "render = array\n");
  CHECK(b.base.room.t60 == 0.6);
  CHECK(b.spacings == std::vector<double>{20.0, 40.0});
  CHECK(b.schemes == std::vector<Scheme>{Scheme::kEC1, Scheme::kEC3});
  CHECK(b.base.band_lo == 300.0);
  CHECK(b.base.band_hi == 3500.0);
  CHECK(b.trials == 4);
  CHECK(b.base.render == RenderPath::kArray);

  // The canonical echo reproduces the config.
  BenchmarkConfig c;
  for (const auto& [k, v] : config_entries(b)) apply_setting(c, k, v);
  CHECK(config_entries(c) == config_entries(b));

  CHECK_THROWS_AS(apply_setting(b, "colour", "red"), ConfigError);
  CHECK_THROWS_AS(apply_setting(b, "t60", "slow"), ConfigError);
  CHECK_THROWS_AS(apply_setting(b, "sources", "2.5"), ConfigError);
  CHECK_THROWS_AS(apply_setting(b, "band", "300"), ConfigError);
  CHECK_THROWS_AS(apply_settings(b, "t60 0.3\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/sphdoa.cfg"), ConfigError);
  CHECK(format_fixed6(2.0 / 3.0) == "0.666667");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("WAV round trip") {
  MultichannelSignal sig(32, 500, 16000.0);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (double& v : sig.samples()) v = u(rng);
  const auto path = scratch("roundtrip.wav").string();
  write_wav(path, sig);
  const MultichannelSignal back = read_wav(path);
  CHECK(back.channels() == 32);
  CHECK(back.length() == 500);
  CHECK(back.sample_rate() == 16000.0);
  CHECK(back.samples() == sig.samples());
  CHECK_THROWS_AS(read_wav(scratch("missing.wav").string()), Error);
}

TEST_CASE("command-line exit codes") {
  const auto cfg = scratch("cli.cfg").string();
  {
    std::ofstream out(cfg);
    out << "duration = 0.4\nmax_image_order = 2\n";
  }
  const auto wav = scratch("cli.wav").string();
  CHECK(run_cli("simulate --config " + cfg + " --out " + wav) == 0);
  CHECK(run_cli("estimate --config " + cfg + " --in " + wav + " --scheme ec3") == 0);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("bench --out x.csv --trials many") == 1);
  CHECK(run_cli("estimate --in " + wav + " --scheme ec9") == 1);
  CHECK(run_cli("simulate --config /nonexistent.cfg --out " + wav) == 1);
  CHECK(run_cli("estimate --in " + scratch("nope.wav").string()) == 2);
  const auto csv = scratch("cli.csv").string();
  CHECK(run_cli("bench --config " + cfg + " --spacings 90 --trials 1 --schemes ec --out " + csv) == 0);
  CHECK(std::filesystem::exists(csv));
}

TEST_CASE("user-supplied source recordings") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 0.1);
  auto write = [&](const std::string& name, std::size_t ch, double fs) {
    MultichannelSignal s(ch, 12000, fs);
    for (double& v : s.samples()) v = static_cast<float>(g(rng));
    const auto p = scratch(name).string();
    write_wav(p, s);
    return p;
  };
  TrialConfig c = quick();
  c.max_image_order = 2;
  c.source_wavs = {write("a.wav", 1, 16000.0), write("b.wav", 1, 16000.0)};
  const TrialReport r = run_trial(c);
  CHECK(r.errors_deg.size() == 2);
  const TrialScene sc = build_scene(c);
  CHECK(sc.scenario.sources[0].signal.size() == 12000);

  TrialConfig stereo = c;
  stereo.source_wavs[1] = write("st.wav", 2, 16000.0);
  CHECK_THROWS_AS(build_scene(stereo), Error);
  TrialConfig rate = c;
  rate.source_wavs[1] = write("r8.wav", 1, 8000.0);
  CHECK_THROWS_AS(build_scene(rate), Error);
  TrialConfig few = c;
  few.source_wavs.pop_back();
  CHECK_THROWS_AS(build_scene(few), Error);
}
