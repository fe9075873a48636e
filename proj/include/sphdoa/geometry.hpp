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

// Unit-vector and spherical-coordinate primitives.
//
// Coordinate convention used across the library: inclination theta is
// measured from +z, azimuth phi from +x toward +y, so
//   x = sin(theta) cos(phi), y = sin(theta) sin(phi), z = cos(theta).

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphdoa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3&) const = default;
};

// A direction: always unit norm. Zero or non-finite input is rejected.
class UnitVec3 {
 public:
  UnitVec3() = default;  // +z
  UnitVec3(double x, double y, double z);
  explicit UnitVec3(const Vec3& v) : UnitVec3(v.x, v.y, v.z) {}

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  Vec3 vec() const { return {x_, y_, z_}; }
  double dot(const UnitVec3& o) const {
    return x_ * o.x_ + y_ * o.y_ + z_ * o.z_;
  }
  UnitVec3 operator-() const { return raw(-x_, -y_, -z_); }
  bool operator==(const UnitVec3&) const = default;

  // Skips normalization; caller guarantees unit norm.
  static UnitVec3 raw(double x, double y, double z) {
    UnitVec3 u;
    u.x_ = x;
    u.y_ = y;
    u.z_ = z;
    return u;
  }

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 1.0;
};

// Arithmetic mean of unit vectors, with its norm cached.
struct MeanVec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double norm = 0.0;

  Vec3 vec() const { return {x, y, z}; }
};

struct SphDirection {
  double azimuth = 0.0;      // [0, 2pi)
  double inclination = 0.0;  // [0, pi]
};

// arccos of the clamped dot product, in [0, pi].
double angular_error(const UnitVec3& a, const UnitVec3& b);

MeanVec3 mean_direction(std::span<const UnitVec3> vs);

struct Medoid {
  std::size_t index = 0;
  UnitVec3 vector;
};

// Element minimizing the summed Euclidean (chord) distance to all elements.
// Ties go to the lowest index.
Medoid medoid(std::span<const UnitVec3> vs);

// Same, over structure-of-arrays coordinates. `scratch` receives the
// per-element distance sums and is resized as needed.
std::size_t medoid_index(std::span<const double> x, std::span<const double> y,
                         std::span<const double> z,
                         std::vector<double>& scratch);

UnitVec3 dir_to_vec(const SphDirection& d);
SphDirection vec_to_dir(const UnitVec3& v);

double deg_to_rad(double deg);
double rad_to_deg(double rad);

// Row-major 3x3 rotation.
struct Rotation {
  double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  static Rotation about_z(double angle);
  // Rodrigues rotation by `angle` about unit `axis`.
  static Rotation about_axis(const UnitVec3& axis, double angle);

  Vec3 apply(const Vec3& v) const;
  UnitVec3 apply(const UnitVec3& v) const;
};

}  // namespace sphdoa
