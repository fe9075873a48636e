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

// Small deterministic generators shared by the property tests.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sphdoa/geometry.hpp"

namespace testgen {

inline sphdoa::UnitVec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    const double x = g(rng), y = g(rng), z = g(rng);
    if (x * x + y * y + z * z > 1e-12) return {x, y, z};
  }
}

inline std::vector<sphdoa::UnitVec3> random_units(std::size_t n,
                                                  std::mt19937_64& rng) {
  std::vector<sphdoa::UnitVec3> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_unit(rng));
  return v;
}

// Unit vectors scattered around `center` with angular spread ~ sigma rad.
inline std::vector<sphdoa::UnitVec3> cap_units(std::size_t n,
                                               const sphdoa::UnitVec3& center,
                                               double sigma,
                                               std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<sphdoa::UnitVec3> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.emplace_back(center.x() + g(rng), center.y() + g(rng), center.z() + g(rng));
  }
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace testgen
