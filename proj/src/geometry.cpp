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

#include "sphdoa/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "sphdoa/kernels.hpp"

namespace sphdoa {

UnitVec3::UnitVec3(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error("cannot normalize a zero or non-finite vector");
  }
  x_ = x / n;
  y_ = y / n;
  z_ = z / n;
}

double angular_error(const UnitVec3& a, const UnitVec3& b) {
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

MeanVec3 mean_direction(std::span<const UnitVec3> vs) {
  if (vs.empty()) throw Error("no valid DOA vectors in frame");
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (const auto& v : vs) {
    sx += v.x();
    sy += v.y();
    sz += v.z();
  }
  const double inv = 1.0 / static_cast<double>(vs.size());
  MeanVec3 m{sx * inv, sy * inv, sz * inv, 0.0};
  m.norm = std::min(1.0, std::sqrt(m.x * m.x + m.y * m.y + m.z * m.z));
  return m;
}

std::size_t medoid_index(std::span<const double> x, std::span<const double> y,
                         std::span<const double> z,
                         std::vector<double>& scratch) {
  const std::size_t n = x.size();
  if (n == 0) throw Error("medoid of an empty set");
  if (y.size() != n || z.size() != n) {
    throw Error("medoid: coordinate arrays differ in length");
  }
  scratch.resize(n);
  kernels::active().chord_distance_sums(x.data(), y.data(), z.data(), n,
                                        scratch.data());
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (scratch[i] < scratch[best]) best = i;
  }
  return best;
}

Medoid medoid(std::span<const UnitVec3> vs) {
  if (vs.empty()) throw Error("medoid of an empty set");
  std::vector<double> x(vs.size()), y(vs.size()), z(vs.size()), scratch;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    x[i] = vs[i].x();
    y[i] = vs[i].y();
    z[i] = vs[i].z();
  }
  const std::size_t idx = medoid_index(x, y, z, scratch);
  return {idx, vs[idx]};
}

UnitVec3 dir_to_vec(const SphDirection& d) {
  const double st = std::sin(d.inclination);
  return UnitVec3(st * std::cos(d.azimuth), st * std::sin(d.azimuth),
                  std::cos(d.inclination));
}

SphDirection vec_to_dir(const UnitVec3& v) {
  double az = std::atan2(v.y(), v.x());
  if (az < 0.0) az += 2.0 * std::numbers::pi;
  if (az >= 2.0 * std::numbers::pi) az = 0.0;
  // atan2 form keeps precision near the poles, where acos(z) does not.
  const double incl = std::atan2(std::hypot(v.x(), v.y()), v.z());
  return {az, incl};
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

Rotation Rotation::about_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Rotation r;
  r.m[0][0] = c;
  r.m[0][1] = -s;
  r.m[1][0] = s;
  r.m[1][1] = c;
  return r;
}

Rotation Rotation::about_axis(const UnitVec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  const double x = axis.x(), y = axis.y(), z = axis.z();
  Rotation r;
  r.m[0][0] = t * x * x + c;
  r.m[0][1] = t * x * y - s * z;
  r.m[0][2] = t * x * z + s * y;
  r.m[1][0] = t * x * y + s * z;
  r.m[1][1] = t * y * y + c;
  r.m[1][2] = t * y * z - s * x;
  r.m[2][0] = t * x * z - s * y;
  r.m[2][1] = t * y * z + s * x;
  r.m[2][2] = t * z * z + c;
  return r;
}

Vec3 Rotation::apply(const Vec3& v) const {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
          m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

UnitVec3 Rotation::apply(const UnitVec3& v) const {
  return UnitVec3(apply(v.vec()));
}

}  // namespace sphdoa
