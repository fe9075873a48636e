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


#include <fstream>

#include "json.hpp"
#include "sphdoa/config.hpp"

namespace sphdoa {

std::string report_csv(const BenchmarkReport& r) {
  std::string out = "scheme,spacing_deg,median_error_deg,trials,seed\n";
  for (const auto& c : r.cells) {
    out += to_string(c.scheme) + "," + format_fixed6(c.spacing_deg) + "," +
           format_fixed6(c.median_error_deg) + "," + std::to_string(c.trials) +
           "," + std::to_string(c.seed) + "\n";
  }
  return out;
}

std::string report_json(const BenchmarkReport& r) {
  nlohmann::ordered_json j;
  j["version"] = r.version;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    nlohmann::ordered_json cell;
    cell["scheme"] = to_string(c.scheme);
    cell["spacing_deg"] = c.spacing_deg;
    cell["median_error_deg"] = c.median_error_deg;
    cell["trials"] = c.trials;
    cell["failed"] = c.failed;
    cell["seed"] = c.seed;
    cells.push_back(cell);
  }
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

BenchmarkReport parse_report_json(const std::string& text) {
  BenchmarkReport r;
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    r.version = j.at("version").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) {
      r.config.emplace_back(k, v.get<std::string>());
    }
    for (const auto& c : j.at("cells")) {
      BenchmarkCell cell;
      cell.scheme = parse_scheme(c.at("scheme").get<std::string>());
      cell.spacing_deg = c.at("spacing_deg").get<double>();
      cell.median_error_deg = c.at("median_error_deg").get<double>();
      cell.trials = c.at("trials").get<std::size_t>();
      cell.failed = c.at("failed").get<std::size_t>();
      cell.seed = c.at("seed").get<std::uint64_t>();
      r.cells.push_back(cell);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report JSON: ") + e.what());
  }
  return r;
}

void emit_report(const BenchmarkReport& r, const std::string& path) {
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (!json && !csv) throw Error("'" + path + "': report must end in .csv or .json");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << (json ? report_json(r) : report_csv(r));
  f.flush();
  if (!f) throw Error("write to '" + path + "' failed");
}

}  // namespace sphdoa
