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

// Estimation-consistency weighting of per-TF DOA vectors.
//
// Per frame t, with u(k,t) the valid DOA vectors of that frame:
//   u_hat   mean of u                       psi     = 1 - sqrt(1 - |u_hat|)
//   u_tilde medoid of u (chord distance)    psi_bar = binarized psi
//   lambda(ref) = 1 - acos(u.ref / (|u||ref|)) / pi
//   psi_hat = mean over the frame of lambda(u_tilde)
// and the four schemes multiply a frame weight with a within-frame weight:
//   EC  = psi     * lambda(u_hat)
//   EC1 = psi     * lambda(u_tilde)
//   EC2 = psi_bar * lambda(u_tilde)
//   EC3 = psi_hat * lambda(u_tilde)

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sphdoa/geometry.hpp"
#include "sphdoa/shd.hpp"

namespace sphdoa {

enum class Scheme { kEC, kEC1, kEC2, kEC3 };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);  // "ec", "ec1", ... (case-insensitive)

enum class BinarizeMethod { kTwoMeans, kFuzzyCMeans };

// Which frames get psi_bar = 1 after clustering psi into two groups.
enum class PsiBarRule {
  kAboveUpperCentroid,  // psi > psi_1 (strict)
  kUpperCluster,        // psi nearer to psi_1 than to psi_0
};

struct FrameStats {
  MeanVec3 u_hat;
  std::optional<UnitVec3> u_tilde;  // empty when the frame has no valid bins
  double psi = 0.0;
  double psi_bar = 0.0;
  double psi_hat = 0.0;
  std::size_t valid_bin_count = 0;
};

// u_hat, psi, u_tilde per frame. psi_bar and psi_hat are left at zero; they
// depend on the other frames / on lambda and are filled by EcAnalysis.
std::vector<FrameStats> frame_stats(const DoaField& field);

// lambda(k,t) against a per-frame reference (u_hat or u_tilde). Invalid
// points get 0. A frame whose reference has norm < 1e-12 while holding
// valid bins gets lambda = 0 and is reported in `flagged` if given.
std::vector<double> within_frame_lambda(const DoaField& field,
                                        std::span<const Vec3> refs,
                                        std::vector<std::uint8_t>* flagged = nullptr);

struct Binarization {
  std::vector<double> psi_bar;
  double c0 = 0.0;
  double c1 = 0.0;
  // Inputs were all identical or no frame was selected.
  bool degenerate = false;
};

Binarization psi_bar_binarize(std::span<const double> psis,
                              BinarizeMethod method,
                              PsiBarRule rule = PsiBarRule::kAboveUpperCentroid);

// Mean of lambda over the valid bins of each frame; 0 for empty frames.
std::vector<double> psi_hat(std::span<const double> lambda_bar,
                            const DoaField& field);

struct WeightField {
  std::size_t bins = 0;
  std::size_t frames = 0;
  std::vector<double> w;
  std::vector<std::uint8_t> valid;
  Scheme scheme = Scheme::kEC;
};

struct EcOptions {
  BinarizeMethod binarize = BinarizeMethod::kTwoMeans;
  PsiBarRule psi_bar_rule = PsiBarRule::kAboveUpperCentroid;
};

// Computes the per-frame statistics once and serves every scheme from them.
class EcAnalysis {
 public:
  explicit EcAnalysis(const DoaField& field, const EcOptions& options = {});

  const std::vector<FrameStats>& frames() const { return stats_; }
  const std::vector<double>& lambda() const { return lambda_; }
  const std::vector<double>& lambda_bar() const { return lambda_bar_; }
  const Binarization& binarization() const { return binarization_; }

  WeightField weights(Scheme scheme) const;

 private:
  const DoaField& field_;
  std::vector<FrameStats> stats_;
  std::vector<double> lambda_;
  std::vector<double> lambda_bar_;
  Binarization binarization_;
};

WeightField ec_weights(const DoaField& field, Scheme scheme,
                       const EcOptions& options = {});

// The ceil(p/100 * n_valid) valid vectors with the largest weights across
// the whole field; ties go to the lowest flattened (frame-major) index.
std::vector<UnitVec3> subsample_top_p(const DoaField& field,
                                      const WeightField& weights, double p);

}  // namespace sphdoa
