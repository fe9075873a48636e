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


#include "sphdoa/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace sphdoa {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  double out = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  const auto [p, ec] = std::from_chars(first, t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  Int out = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = lower(trim(v));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + v + "'");
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 3) {
    throw ConfigError("'" + key + "': expected three comma-separated numbers");
  }
  return {to_double(key, parts[0]), to_double(key, parts[1]),
          to_double(key, parts[2])};
}

std::string vec3_text(const Vec3& v) {
  return format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z);
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt(xs[i]);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, r.ptr};
}

std::string format_fixed6(double v) {
  char buf[512];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
  return {buf, r.ptr};
}

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) {
    if (part.empty()) continue;
    out.push_back(to_double("list", part));
  }
  if (out.empty()) throw ConfigError("empty number list '" + s + "'");
  return out;
}

std::pair<double, double> parse_band(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw ConfigError("band must look like LO:HI, got '" + s + "'");
  return {to_double("band", parts[0]), to_double("band", parts[1])};
}

void apply_setting(BenchmarkConfig& cfg, const std::string& raw_key,
                   const std::string& value) {
  const std::string key = lower(trim(raw_key));
  const std::string v = trim(value);
  TrialConfig& t = cfg.base;
  if (key == "room_dims") {
    t.room.dims = to_vec3(key, v);
  } else if (key == "t60") {
    t.room.t60 = to_double(key, v);
  } else if (key == "speed_of_sound") {
    t.room.speed_of_sound = to_double(key, v);
  } else if (key == "absorption") {
    const std::string a = lower(v);
    if (a == "sabine") {
      t.room.absorption = AbsorptionModel::kSabine;
    } else if (a == "eyring") {
      t.room.absorption = AbsorptionModel::kEyring;
    } else {
      throw ConfigError("'absorption': expected sabine or eyring");
    }
  } else if (key == "array_center") {
    t.array_center = to_vec3(key, v);
  } else if (key == "array_radius") {
    t.array_radius = to_double(key, v);
  } else if (key == "rigid") {
    t.rigid = to_bool(key, v);
  } else if (key == "snr_db") {
    t.snr_db = to_double(key, v);
  } else if (key == "sources") {
    t.sources = to_int<int>(key, v);
  } else if (key == "spacing_deg") {
    t.spacing_deg = to_double(key, v);
  } else if (key == "source_distance") {
    t.source_distance = to_double(key, v);
  } else if (key == "duration") {
    t.duration = to_double(key, v);
  } else if (key == "sample_rate") {
    t.sample_rate = to_double(key, v);
  } else if (key == "seed") {
    t.seed = to_int<std::uint64_t>(key, v);
  } else if (key == "max_image_order") {
    t.max_image_order = to_int<int>(key, v);
  } else if (key == "max_delay") {
    t.max_delay = to_double(key, v);
  } else if (key == "render") {
    const std::string r = lower(v);
    if (r == "shd" || r == "shd_direct") {
      t.render = RenderPath::kShdDirect;
    } else if (r == "array") {
      t.render = RenderPath::kArray;
    } else {
      throw ConfigError("'render': expected shd or array");
    }
  } else if (key == "source_wavs") {
    t.source_wavs.clear();
    for (const auto& p : split(v, ',')) {
      if (!p.empty()) t.source_wavs.push_back(p);
    }
  } else if (key == "fft_size") {
    t.stft.fft_size = to_int<std::size_t>(key, v);
  } else if (key == "overlap") {
    t.stft.overlap = to_double(key, v);
  } else if (key == "window") {
    const std::string w = lower(v);
    if (w == "hann") {
      t.stft.window = Window::kHann;
    } else if (w == "rect" || w == "rectangular") {
      t.stft.window = Window::kRectangular;
    } else {
      throw ConfigError("'window': expected hann or rect");
    }
  } else if (key == "band") {
    std::tie(t.band_lo, t.band_hi) = parse_band(v);
  } else if (key == "order") {
    t.order = to_int<int>(key, v);
  } else if (key == "max_gain_db") {
    t.max_gain_db = to_double(key, v);
  } else if (key == "energy_floor") {
    t.energy_floor = to_double(key, v);
  } else if (key == "p_percent" || key == "p") {
    t.p_percent = to_double(key, v);
  } else if (key == "scheme") {
    try {
      t.scheme = parse_scheme(v);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "binarize") {
    const std::string b = lower(v);
    if (b == "two-means" || b == "two_means" || b == "kmeans") {
      t.ec.binarize = BinarizeMethod::kTwoMeans;
    } else if (b == "fuzzy" || b == "fcm" || b == "fuzzy-cmeans") {
      t.ec.binarize = BinarizeMethod::kFuzzyCMeans;
    } else {
      throw ConfigError("'binarize': expected two-means or fuzzy");
    }
  } else if (key == "psi_bar_rule") {
    const std::string r = lower(v);
    if (r == "above-centroid" || r == "above_centroid") {
      t.ec.psi_bar_rule = PsiBarRule::kAboveUpperCentroid;
    } else if (r == "cluster" || r == "upper-cluster") {
      t.ec.psi_bar_rule = PsiBarRule::kUpperCluster;
    } else {
      throw ConfigError("'psi_bar_rule': expected above-centroid or cluster");
    }
  } else if (key == "restarts") {
    t.restarts = to_int<std::size_t>(key, v);
  } else if (key == "max_iter") {
    t.max_iter = to_int<std::size_t>(key, v);
  } else if (key == "spacings") {
    cfg.spacings = parse_number_list(v);
  } else if (key == "trials") {
    cfg.trials = to_int<std::size_t>(key, v);
  } else if (key == "schemes") {
    cfg.schemes.clear();
    for (const auto& s : split(v, ',')) {
      if (s.empty()) continue;
      try {
        cfg.schemes.push_back(parse_scheme(s));
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
  } else if (key == "threads") {
    cfg.threads = to_int<std::size_t>(key, v);
  } else {
    throw ConfigError("unknown config key '" + raw_key + "'");
  }
}

void apply_settings(BenchmarkConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

BenchmarkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  BenchmarkConfig cfg;
  try {
    apply_settings(cfg, ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> config_entries(
    const BenchmarkConfig& cfg) {
  const TrialConfig& t = cfg.base;
  auto fmt = [](double d) { return format_double(d); };
  auto sch = [](Scheme s) { return to_string(s); };
  auto str = [](const std::string& s) { return s; };
  return {
      {"room_dims", vec3_text(t.room.dims)},
      {"t60", fmt(t.room.t60)},
      {"speed_of_sound", fmt(t.room.speed_of_sound)},
      {"absorption", t.room.absorption == AbsorptionModel::kSabine ? "sabine" : "eyring"},
      {"array_center", vec3_text(t.array_center)},
      {"array_radius", fmt(t.array_radius)},
      {"rigid", t.rigid ? "true" : "false"},
      {"snr_db", fmt(t.snr_db)},
      {"sources", std::to_string(t.sources)},
      {"spacing_deg", fmt(t.spacing_deg)},
      {"source_distance", fmt(t.source_distance)},
      {"duration", fmt(t.duration)},
      {"sample_rate", fmt(t.sample_rate)},
      {"seed", std::to_string(t.seed)},
      {"max_image_order", std::to_string(t.max_image_order)},
      {"max_delay", fmt(t.max_delay)},
      {"render", t.render == RenderPath::kShdDirect ? "shd" : "array"},
      {"source_wavs", join(t.source_wavs, str)},
      {"fft_size", std::to_string(t.stft.fft_size)},
      {"overlap", fmt(t.stft.overlap)},
      {"window", t.stft.window == Window::kHann ? "hann" : "rect"},
      {"band", fmt(t.band_lo) + ":" + fmt(t.band_hi)},
      {"order", std::to_string(t.order)},
      {"max_gain_db", fmt(t.max_gain_db)},
      {"energy_floor", fmt(t.energy_floor)},
      {"p_percent", fmt(t.p_percent)},
      {"scheme", to_string(t.scheme)},
      {"binarize", t.ec.binarize == BinarizeMethod::kTwoMeans ? "two-means" : "fuzzy"},
      {"psi_bar_rule", t.ec.psi_bar_rule == PsiBarRule::kAboveUpperCentroid
                           ? "above-centroid"
                           : "cluster"},
      {"restarts", std::to_string(t.restarts)},
      {"max_iter", std::to_string(t.max_iter)},
      {"spacings", join(cfg.spacings, fmt)},
      {"trials", std::to_string(cfg.trials)},
      {"schemes", join(cfg.schemes, sch)},
  };
}

}  // namespace sphdoa
