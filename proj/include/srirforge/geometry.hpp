/*
Copyright 2026 The SRIRForge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef SRIRFORGE_GEOMETRY_HPP_
#define SRIRFORGE_GEOMETRY_HPP_

#include <cmath>
#include <numbers>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace srirforge {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= 1.0 / s; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Throws InvalidArgument for the zero vector.
Vec3 normalize(const Vec3& v);

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Azimuth in (-180, 180], elevation in [-90, 90], both in degrees.
struct Direction {
  double azimuth = 0.0;
  double elevation = 0.0;
};

Vec3 sph_to_cart(const Direction& d, double r = 1.0);
Direction cart_to_sph(const Vec3& v);

// Angle between two unit vectors in degrees. Inputs must be unit length
// within 1e-6.
double angular_distance(const Vec3& u, const Vec3& v);

enum class Pattern { kOmnidirectional, kCardioid, kHypercardioid };

std::string_view to_string(Pattern p);
Pattern pattern_from_string(std::string_view name);

struct CapsuleSpec {
  Direction orientation;
  double offset_radius = 0.0;
  Pattern pattern = Pattern::kOmnidirectional;

  Vec3 axis() const { return sph_to_cart(orientation, 1.0); }
};

struct MicArray {
  Vec3 center;
  std::vector<CapsuleSpec> capsules;

  Vec3 capsule_position(std::size_t i) const {
    return center + sph_to_cart(capsules.at(i).orientation, capsules.at(i).offset_radius);
  }
};

inline constexpr double kTetrahedralRadius = 0.042;

// Four hypercardioid capsules at (45,35), (-45,-35), (135,-35), (-135,35),
// 4.2 cm from the center and pointing radially outward (order M1..M4).
MicArray tetrahedral_array(const Vec3& center);

// A single omnidirectional capsule at the center.
MicArray omni_array(const Vec3& center);

struct CircularPath {
  double radius = 0.0;
  double height = 0.0;          // absolute z of the orbit
  double center_dx = 0.0;       // orbit center offset from the array center
  double center_dy = 0.0;
};

struct LinearPath {
  Vec3 start;
  Vec3 end;
};

struct Trajectory {
  std::variant<CircularPath, LinearPath> path;
  int group_index = 0;
  int height_index = 0;

  bool is_circular() const { return std::holds_alternative<CircularPath>(path); }
};

struct TrajectorySample {
  Vec3 position;
  Vec3 doa;
  int index = 0;
};

struct CylinderProjection {
  Vec3 point;
  double z_residual = 0.0;
};

// Intersects the ray from `array_center` along `doa` with the vertical
// cylinder of `radius` around the array, then snaps z to `height`. The
// distance that was snapped away is reported as z_residual.
CylinderProjection project_doa_circular(const Vec3& doa, const Vec3& array_center, double radius,
                                        double height);

// Point on the segment [a, b] closest to the ray {array_center + t*doa, t >= 0}.
Vec3 project_doa_linear(const Vec3& doa, const Vec3& array_center, const Vec3& a, const Vec3& b);

// Samples a trace so that consecutive points subtend at most `spacing`
// degrees at the array center. Circular traces start at azimuth 0 relative
// to the array and run counterclockwise over the full orbit; linear traces
// include both endpoints.
std::vector<TrajectorySample> sample_trajectory(const Trajectory& traj, const Vec3& array_center,
                                                double spacing);

}  // namespace srirforge

#endif  // SRIRFORGE_GEOMETRY_HPP_
