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

#include "sphdoa/ec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "sphdoa/clustering.hpp"

namespace sphdoa {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kEC: return "ec";
    case Scheme::kEC1: return "ec1";
    case Scheme::kEC2: return "ec2";
    case Scheme::kEC3: return "ec3";
  }
  return "?";
}

Scheme parse_scheme(const std::string& s) {
  std::string t;
  for (char c : s) {
    if (c != '-' && c != '_') {
      t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (t == "ec") return Scheme::kEC;
  if (t == "ec1") return Scheme::kEC1;
  if (t == "ec2") return Scheme::kEC2;
  if (t == "ec3") return Scheme::kEC3;
  throw Error("unknown scheme '" + s + "' (expected ec, ec1, ec2 or ec3)");
}

std::vector<FrameStats> frame_stats(const DoaField& field) {
  std::vector<FrameStats> out(field.frames);
  std::vector<UnitVec3> members;
  std::vector<double> x, y, z, scratch;
  for (std::size_t t = 0; t < field.frames; ++t) {
    members.clear();
    x.clear();
    y.clear();
    z.clear();
    for (std::size_t k : field.band) {
      const std::size_t idx = field.index(k, t);
      if (!field.valid[idx]) continue;
      const UnitVec3& u = field.u[idx];
      members.push_back(u);
      x.push_back(u.x());
      y.push_back(u.y());
      z.push_back(u.z());
    }
    FrameStats& fs = out[t];
    fs.valid_bin_count = members.size();
    if (members.empty()) continue;
    fs.u_hat = mean_direction(members);
    fs.psi = 1.0 - std::sqrt(1.0 - std::min(1.0, fs.u_hat.norm));
    fs.u_tilde = members[medoid_index(x, y, z, scratch)];
  }
  return out;
}

std::vector<double> within_frame_lambda(const DoaField& field,
                                        std::span<const Vec3> refs,
                                        std::vector<std::uint8_t>* flagged) {
  if (refs.size() != field.frames) {
    throw Error("one reference vector per frame is required");
  }
  std::vector<double> lambda(field.u.size(), 0.0);
  if (flagged != nullptr) flagged->assign(field.frames, 0);
  for (std::size_t t = 0; t < field.frames; ++t) {
    const Vec3 ref = refs[t];
    const double rn = ref.norm();
    bool any = false;
    for (std::size_t k : field.band) any = any || field.valid[field.index(k, t)];
    if (!any) continue;
    if (!(rn >= 1e-12)) {
      if (flagged != nullptr) (*flagged)[t] = 1;
      continue;
    }
    for (std::size_t k : field.band) {
      const std::size_t idx = field.index(k, t);
      if (!field.valid[idx]) continue;
      const Vec3 u = field.u[idx].vec();
      const double cosine = std::clamp(u.dot(ref) / (u.norm() * rn), -1.0, 1.0);
      lambda[idx] = 1.0 - std::acos(cosine) / std::numbers::pi;
    }
  }
  return lambda;
}

Binarization psi_bar_binarize(std::span<const double> psis,
                              BinarizeMethod method, PsiBarRule rule) {
  Binarization b;
  b.psi_bar.assign(psis.size(), 0.0);
  if (psis.size() < 2) {
    b.degenerate = true;
    return b;
  }
  const ScalarCentroids cs = method == BinarizeMethod::kTwoMeans
                                 ? scalar_two_means(psis)
                                 : fuzzy_cmeans_scalar(psis);
  b.c0 = cs.c0;
  b.c1 = cs.c1;
  if (cs.degenerate) {
    b.degenerate = true;
    return b;
  }
  bool any = false;
  for (std::size_t i = 0; i < psis.size(); ++i) {
    const double v = psis[i];
    const bool on = rule == PsiBarRule::kAboveUpperCentroid
                        ? v > cs.c1
                        : std::abs(v - cs.c1) < std::abs(v - cs.c0);
    b.psi_bar[i] = on ? 1.0 : 0.0;
    any = any || on;
  }
  b.degenerate = !any;
  return b;
}

std::vector<double> psi_hat(std::span<const double> lambda_bar,
                            const DoaField& field) {
  if (lambda_bar.size() != field.u.size()) {
    throw Error("lambda grid does not match the DOA field");
  }
  std::vector<double> out(field.frames, 0.0);
  for (std::size_t t = 0; t < field.frames; ++t) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k : field.band) {
      const std::size_t idx = field.index(k, t);
      if (!field.valid[idx]) continue;
      sum += lambda_bar[idx];
      ++n;
    }
    out[t] = n > 0 ? sum / static_cast<double>(n) : 0.0;
  }
  return out;
}

EcAnalysis::EcAnalysis(const DoaField& field, const EcOptions& options)
    : field_(field), stats_(frame_stats(field)) {
  std::vector<Vec3> hat(field.frames), tilde(field.frames);
  for (std::size_t t = 0; t < field.frames; ++t) {
    hat[t] = stats_[t].u_hat.vec();
    if (stats_[t].u_tilde) tilde[t] = stats_[t].u_tilde->vec();
  }
  lambda_ = within_frame_lambda(field, hat);
  lambda_bar_ = within_frame_lambda(field, tilde);

  const std::vector<double> hats = psi_hat(lambda_bar_, field);
  std::vector<double> psis;
  std::vector<std::size_t> nonempty;
  for (std::size_t t = 0; t < field.frames; ++t) {
    stats_[t].psi_hat = hats[t];
    if (stats_[t].valid_bin_count > 0) {
      psis.push_back(stats_[t].psi);
      nonempty.push_back(t);
    }
  }
  binarization_ = psi_bar_binarize(psis, options.binarize, options.psi_bar_rule);
  for (std::size_t i = 0; i < nonempty.size(); ++i) {
    stats_[nonempty[i]].psi_bar = binarization_.psi_bar[i];
  }
}

WeightField EcAnalysis::weights(Scheme scheme) const {
  WeightField wf;
  wf.bins = field_.bins;
  wf.frames = field_.frames;
  wf.valid = field_.valid;
  wf.scheme = scheme;
  wf.w.assign(field_.u.size(), 0.0);
  const std::vector<double>& within =
      scheme == Scheme::kEC ? lambda_ : lambda_bar_;
  for (std::size_t t = 0; t < field_.frames; ++t) {
    const FrameStats& fs = stats_[t];
    double frame_weight = 0.0;
    switch (scheme) {
      case Scheme::kEC:
      case Scheme::kEC1: frame_weight = fs.psi; break;
      case Scheme::kEC2: frame_weight = fs.psi_bar; break;
      case Scheme::kEC3: frame_weight = fs.psi_hat; break;
    }
    for (std::size_t k : field_.band) {
      const std::size_t idx = field_.index(k, t);
      if (field_.valid[idx]) wf.w[idx] = frame_weight * within[idx];
    }
  }
  return wf;
}

WeightField ec_weights(const DoaField& field, Scheme scheme,
                       const EcOptions& options) {
  return EcAnalysis(field, options).weights(scheme);
}

std::vector<UnitVec3> subsample_top_p(const DoaField& field,
                                      const WeightField& weights, double p) {
  if (!(p > 0.0 && p <= 100.0)) throw Error("p must lie in (0, 100]");
  if (weights.w.size() != field.u.size()) {
    throw Error("weight field does not match the DOA field");
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < field.valid.size(); ++i) {
    if (field.valid[i]) idx.push_back(i);
  }
  if (idx.empty()) throw Error("no valid DOA vectors to subsample");
  // p * n / 100 is exact for integral p and n; the slack absorbs rounding
  // for fractional p.
  const double exact = p * static_cast<double>(idx.size()) / 100.0;
  auto count = static_cast<std::size_t>(
      std::ceil(exact - 1e-9 * std::max(1.0, exact)));
  count = std::clamp<std::size_t>(count, 1, idx.size());
  auto before = [&](std::size_t a, std::size_t b) {
    if (weights.w[a] != weights.w[b]) return weights.w[a] > weights.w[b];
    return a < b;
  };
  std::partial_sort(idx.begin(),
                    idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                    before);
  std::vector<UnitVec3> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(field.u[idx[i]]);
  return out;
}

}  // namespace sphdoa
