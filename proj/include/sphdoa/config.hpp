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

// Line-oriented `key = value` configuration (`#` starts a comment) and
// benchmark report serialization.

#include <string>
#include <utility>
#include <vector>

#include "sphdoa/pipeline.hpp"

namespace sphdoa {

// Usage-level problems: unknown keys, malformed values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

void apply_setting(BenchmarkConfig& cfg, const std::string& key,
                   const std::string& value);
void apply_settings(BenchmarkConfig& cfg, const std::string& text);
BenchmarkConfig load_config(const std::string& path);

// Canonical key/value listing; applying it to a default config reproduces
// `cfg` exactly.
std::vector<std::pair<std::string, std::string>> config_entries(
    const BenchmarkConfig& cfg);

std::vector<double> parse_number_list(const std::string& s);
std::pair<double, double> parse_band(const std::string& s);  // "LO:HI"

// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);
// Fixed six decimals, locale independent.
std::string format_fixed6(double v);

std::string report_csv(const BenchmarkReport& r);
std::string report_json(const BenchmarkReport& r);
BenchmarkReport parse_report_json(const std::string& text);

// Format chosen from the extension (.csv or .json).
void emit_report(const BenchmarkReport& r, const std::string& path);

}  // namespace sphdoa
