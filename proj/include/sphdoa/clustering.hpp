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

// Scalar and directional clustering: exact 1-D two-means and fuzzy c-means
// (used to binarize the per-frame coherence), spherical k-means for the
// final source directions, and permutation matching against ground truth.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sphdoa/geometry.hpp"

namespace sphdoa {

struct ScalarCentroids {
  double c0 = 0.0;  // c0 <= c1
  double c1 = 0.0;
  bool degenerate = false;  // all inputs identical
};

// Optimal two-cluster k-means of scalars (a threshold split of the sorted
// values minimizing within-cluster squared error). Lowest split wins ties.
ScalarCentroids scalar_two_means(std::span<const double> xs);

struct FuzzyParams {
  double fuzzifier = 2.0;
  double tolerance = 1e-9;
  std::size_t max_iter = 1000;
};

// Two-cluster fuzzy c-means, initialized at (min, max). If `objective` is
// given it receives J_m evaluated after every centroid update.
ScalarCentroids fuzzy_cmeans_scalar(std::span<const double> xs,
                                    const FuzzyParams& params = {},
                                    std::vector<double>* objective = nullptr);

struct ClusterResult {
  std::vector<UnitVec3> centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;  // sum of (1 - u . c)
  std::size_t iterations = 0;
};

struct KMeansParams {
  std::size_t clusters = 2;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
};

// Spherical k-means with cosine dissimilarity 1 - u.c, renormalized-mean
// centroid updates and k-means++ seeding; best of `restarts` runs. An empty
// cluster is reseeded at the point farthest from its current centroid.
// `inertia_trace`, if given, receives the inertia after each assignment step
// of the winning run.
ClusterResult spherical_kmeans(std::span<const UnitVec3> vs,
                               const KMeansParams& params,
                               std::vector<double>* inertia_trace = nullptr);

double spherical_inertia(std::span<const UnitVec3> vs,
                         std::span<const UnitVec3> centroids,
                         std::span<const std::size_t> assignments);

struct SourceMatch {
  // truth index i is paired with estimate est_index[i]
  std::vector<std::size_t> est_index;
  std::vector<double> errors;  // radians, per truth source
  double total = 0.0;
};

// Exhaustive search over pairings minimizing the summed angular error.
// At most 8 sources.
SourceMatch match_sources(std::span<const UnitVec3> est,
                          std::span<const UnitVec3> truth);

}  // namespace sphdoa
