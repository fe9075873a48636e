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

#include "sphdoa/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace sphdoa {

ScalarCentroids scalar_two_means(std::span<const double> xs) {
  if (xs.size() < 2) throw Error("two-means needs at least two values");
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  if (s.front() == s.back()) return {s.front(), s.front(), true};

  const std::size_t n = s.size();
  std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + s[i];
    prefix_sq[i + 1] = prefix_sq[i] + s[i] * s[i];
  }
  auto sse = [&](std::size_t lo, std::size_t hi) {
    const double cnt = static_cast<double>(hi - lo);
    const double sum = prefix[hi] - prefix[lo];
    return (prefix_sq[hi] - prefix_sq[lo]) - sum * sum / cnt;
  };
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t split = 1; split < n; ++split) {
    // Equal values must stay in one cluster.
    if (s[split] == s[split - 1]) continue;
    const double cost = sse(0, split) + sse(split, n);
    if (best == 0 || cost < best_cost - 1e-12 * std::max(1.0, best_cost)) {
      best_cost = cost;
      best = split;
    }
  }
  const double c0 = (prefix[best] - prefix[0]) / static_cast<double>(best);
  const double c1 = (prefix[n] - prefix[best]) / static_cast<double>(n - best);
  return {c0, c1, false};
}

ScalarCentroids fuzzy_cmeans_scalar(std::span<const double> xs,
                                    const FuzzyParams& params,
                                    std::vector<double>* objective) {
  if (xs.size() < 2) throw Error("fuzzy c-means needs at least two values");
  if (!(params.fuzzifier > 1.0)) throw Error("fuzzifier must exceed 1");
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  if (*mn == *mx) return {*mn, *mn, true};

  const double m = params.fuzzifier;
  const double expo = 2.0 / (m - 1.0);
  double c[2] = {*mn, *mx};
  const std::size_t n = xs.size();
  std::vector<double> u0(n), u1(n);

  auto memberships = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = std::abs(xs[i] - c[0]);
      const double d1 = std::abs(xs[i] - c[1]);
      if (d0 == 0.0 || d1 == 0.0) {
        // Coincides with a centroid: crisp membership (split if both).
        u0[i] = d0 == 0.0 ? (d1 == 0.0 ? 0.5 : 1.0) : 0.0;
      } else {
        u0[i] = 1.0 / (1.0 + std::pow(d0 / d1, expo));
      }
      u1[i] = 1.0 - u0[i];
    }
  };
  auto cost = [&]() {
    double j = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = xs[i] - c[0], d1 = xs[i] - c[1];
      j += std::pow(u0[i], m) * d0 * d0 + std::pow(u1[i], m) * d1 * d1;
    }
    return j;
  };

  for (std::size_t it = 0; it < params.max_iter; ++it) {
    memberships();
    double num[2] = {0.0, 0.0}, den[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double w0 = std::pow(u0[i], m), w1 = std::pow(u1[i], m);
      num[0] += w0 * xs[i];
      den[0] += w0;
      num[1] += w1 * xs[i];
      den[1] += w1;
    }
    const double next0 = den[0] > 0.0 ? num[0] / den[0] : c[0];
    const double next1 = den[1] > 0.0 ? num[1] / den[1] : c[1];
    const double shift = std::max(std::abs(next0 - c[0]), std::abs(next1 - c[1]));
    c[0] = next0;
    c[1] = next1;
    if (objective != nullptr) objective->push_back(cost());
    if (shift < params.tolerance) break;
  }
  if (c[0] > c[1]) std::swap(c[0], c[1]);
  return {c[0], c[1], false};
}

double spherical_inertia(std::span<const UnitVec3> vs,
                         std::span<const UnitVec3> centroids,
                         std::span<const std::size_t> assignments) {
  double total = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    total += 1.0 - vs[i].dot(centroids[assignments[i]]);
  }
  return total;
}

namespace {

std::size_t nearest(const UnitVec3& v, std::span<const UnitVec3> cs) {
  std::size_t best = 0;
  double best_sim = v.dot(cs[0]);
  for (std::size_t c = 1; c < cs.size(); ++c) {
    const double sim = v.dot(cs[c]);
    if (sim > best_sim) {
      best_sim = sim;
      best = c;
    }
  }
  return best;
}

std::vector<UnitVec3> kmeanspp_seed(std::span<const UnitVec3> vs,
                                    std::size_t k, std::mt19937_64& rng) {
  std::vector<UnitVec3> cs;
  std::uniform_int_distribution<std::size_t> pick(0, vs.size() - 1);
  cs.push_back(vs[pick(rng)]);
  std::vector<double> d(vs.size());
  while (cs.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      double best = 2.0;
      for (const auto& c : cs) best = std::min(best, 1.0 - vs[i].dot(c));
      d[i] = std::max(0.0, best);
      total += d[i];
    }
    std::size_t chosen = 0;
    if (total <= 0.0) {
      chosen = pick(rng);
    } else {
      std::uniform_real_distribution<double> draw(0.0, total);
      double r = draw(rng);
      chosen = vs.size() - 1;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        r -= d[i];
        if (r < 0.0) {
          chosen = i;
          break;
        }
      }
    }
    cs.push_back(vs[chosen]);
  }
  return cs;
}

ClusterResult run_once(std::span<const UnitVec3> vs, std::size_t k,
                       std::size_t max_iter, std::mt19937_64& rng,
                       std::vector<double>* trace) {
  ClusterResult r;
  r.centroids = kmeanspp_seed(vs, k, rng);
  r.assignments.assign(vs.size(), k);  // sentinel: nothing assigned yet
  std::vector<Vec3> sums(k);
  std::vector<std::size_t> counts(k);
  for (std::size_t it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const std::size_t c = nearest(vs[i], r.centroids);
      if (c != r.assignments[i]) {
        r.assignments[i] = c;
        changed = true;
      }
    }
    r.iterations = it + 1;
    if (trace != nullptr) {
      trace->push_back(spherical_inertia(vs, r.centroids, r.assignments));
    }
    if (!changed) break;

    std::fill(sums.begin(), sums.end(), Vec3{});
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      sums[r.assignments[i]] = sums[r.assignments[i]] + vs[i].vec();
      ++counts[r.assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0 || !(sums[c].norm() > 1e-12)) {
        // Reseed at the point worst served by its current centroid.
        std::size_t far = 0;
        double worst = -1.0;
        for (std::size_t i = 0; i < vs.size(); ++i) {
          const double dis = 1.0 - vs[i].dot(r.centroids[r.assignments[i]]);
          if (dis > worst) {
            worst = dis;
            far = i;
          }
        }
        r.centroids[c] = vs[far];
      } else {
        r.centroids[c] = UnitVec3(sums[c]);
      }
    }
    if (trace != nullptr) {
      trace->push_back(spherical_inertia(vs, r.centroids, r.assignments));
    }
  }
  r.inertia = spherical_inertia(vs, r.centroids, r.assignments);
  return r;
}

}  // namespace

ClusterResult spherical_kmeans(std::span<const UnitVec3> vs,
                               const KMeansParams& params,
                               std::vector<double>* inertia_trace) {
  const std::size_t k = params.clusters;
  if (k == 0) throw Error("cluster count must be positive");
  if (vs.size() < k) throw Error("fewer vectors than clusters");
  const std::size_t restarts = std::max<std::size_t>(1, params.restarts);

  ClusterResult best;
  std::vector<double> best_trace;
  bool have = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(params.seed),
                      static_cast<std::uint32_t>(params.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::vector<double> trace;
    ClusterResult run = run_once(vs, k, params.max_iter, rng,
                                 inertia_trace != nullptr ? &trace : nullptr);
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      best_trace = std::move(trace);
      have = true;
    }
  }
  if (inertia_trace != nullptr) *inertia_trace = std::move(best_trace);
  return best;
}

SourceMatch match_sources(std::span<const UnitVec3> est,
                          std::span<const UnitVec3> truth) {
  if (est.size() != truth.size()) {
    throw Error("estimate and ground-truth source counts differ");
  }
  if (truth.size() > 8) throw Error("match_sources supports at most 8 sources");
  const std::size_t n = truth.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  SourceMatch best;
  best.total = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += angular_error(truth[i], est[perm[i]]);
    if (total < best.total) {
      best.total = total;
      best.est_index = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.errors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    best.errors[i] = angular_error(truth[i], est[best.est_index[i]]);
  }
  if (n == 0) best.total = 0.0;
  return best;
}

}  // namespace sphdoa
