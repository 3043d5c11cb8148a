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

#include "srirforge/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>

#include "srirforge/error.hpp"

namespace srirforge {
namespace {

constexpr double kUnitTolerance = 1e-6;
constexpr double kAngleSlack = 1e-9;

double angle_between(const Vec3& a, const Vec3& b) {
  return rad_to_deg(std::atan2(norm(cross(a, b)), dot(a, b)));
}

// Closest point between the line c + t*u and the line a + s*(b - a), ignoring
// constraints. Returns false when the lines are parallel.
bool line_line_params(const Vec3& c, const Vec3& u, const Vec3& a, const Vec3& seg, double& t,
                      double& s) {
  const Vec3 w = c - a;
  const double uu = dot(u, u);
  const double us = dot(u, seg);
  const double ss = dot(seg, seg);
  const double uw = dot(u, w);
  const double sw = dot(seg, w);
  const double det = uu * ss - us * us;
  if (det <= 1e-14 * uu * ss) return false;
  t = (us * sw - ss * uw) / det;
  s = (uu * sw - us * uw) / det;
  return true;
}

std::vector<TrajectorySample> sample_circular(const CircularPath& path, int,
                                              const Vec3& array_center, double spacing) {
  if (!(path.radius > 0.0)) throw InvalidArgument("circular trajectory radius must be > 0");
  const double ox = array_center.x + path.center_dx;
  const double oy = array_center.y + path.center_dy;
  const double off_x = array_center.x - ox;
  const double off_y = array_center.y - oy;
  if (off_x * off_x + off_y * off_y >= path.radius * path.radius) {
    throw InvalidArgument("array center must lie inside the circular trajectory footprint");
  }

  // Horizontal ray from the array at azimuth phi hits the orbit circle at
  // distance s > 0.
  auto point_at = [&](double phi) {
    const double ex = std::cos(phi);
    const double ey = std::sin(phi);
    const double b = off_x * ex + off_y * ey;
    const double c = off_x * off_x + off_y * off_y - path.radius * path.radius;
    const double s = -b + std::sqrt(b * b - c);
    return Vec3{array_center.x + s * ex, array_center.y + s * ey, path.height};
  };

  int count = static_cast<int>(std::ceil(360.0 / spacing - kAngleSlack));
  count = std::max(count, 3);
  for (;; ++count) {
    std::vector<TrajectorySample> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / count;
      const Vec3 p = point_at(phi);
      samples.push_back({p, normalize(p - array_center), k});
    }
    bool ok = true;
    for (int k = 0; k < count && ok; ++k) {
      const auto& next = samples[static_cast<std::size_t>((k + 1) % count)];
      ok = angle_between(samples[static_cast<std::size_t>(k)].doa, next.doa) <= spacing + kAngleSlack;
    }
    if (ok) return samples;
  }
}

std::vector<TrajectorySample> sample_linear(const LinearPath& path, const Vec3& array_center,
                                            double spacing) {
  const Vec3 seg = path.end - path.start;
  if (norm(seg) <= 0.0) throw InvalidArgument("linear trajectory start and end coincide");
  const Vec3 to_start = path.start - array_center;
  const Vec3 to_end = path.end - array_center;
  if (norm(to_start) <= 0.0 || norm(to_end) <= 0.0) {
    throw InvalidArgument("linear trajectory endpoint coincides with the array center");
  }
  const Vec3 us = normalize(to_start);
  const Vec3 ue = normalize(to_end);
  const double total = angle_between(us, ue);
  if (total <= 1e-9 || total >= 180.0 - 1e-9) {
    throw InvalidArgument("array center lies on the linear trajectory's supporting line");
  }
  const int intervals = std::max(1, static_cast<int>(std::ceil(total / spacing - kAngleSlack)));

  // Orthonormal in-plane basis so each sample direction is a rotation of us
  // towards ue by an equal angular step.
  const Vec3 perp = normalize(ue - dot(ue, us) * us);
  const double total_rad = deg_to_rad(total);

  std::vector<TrajectorySample> samples;
  samples.reserve(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) {
    Vec3 p;
    if (k == 0) {
      p = path.start;
    } else if (k == intervals) {
      p = path.end;
    } else {
      const double ang = total_rad * k / intervals;
      const Vec3 dir = std::cos(ang) * us + std::sin(ang) * perp;
      double t = 0.0;
      double s = 0.0;
      line_line_params(array_center, dir, path.start, seg, t, s);
      p = path.start + std::clamp(s, 0.0, 1.0) * seg;
    }
    samples.push_back({p, normalize(p - array_center), k});
  }
  return samples;
}

}  // namespace

Vec3 normalize(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero or non-finite vector");
  return v * (1.0 / n);
}

Vec3 sph_to_cart(const Direction& d, double r) {
  const double az = deg_to_rad(d.azimuth);
  const double el = deg_to_rad(d.elevation);
  return {r * std::cos(el) * std::cos(az), r * std::cos(el) * std::sin(az), r * std::sin(el)};
}

Direction cart_to_sph(const Vec3& v) {
  const double horiz = std::hypot(v.x, v.y);
  double az = rad_to_deg(std::atan2(v.y, v.x));
  if (az <= -180.0) az = 180.0;
  return {az, rad_to_deg(std::atan2(v.z, horiz))};
}

double angular_distance(const Vec3& u, const Vec3& v) {
  if (std::abs(norm(u) - 1.0) > kUnitTolerance || std::abs(norm(v) - 1.0) > kUnitTolerance) {
    throw InvalidArgument("angular_distance expects unit vectors");
  }
  return rad_to_deg(std::acos(std::clamp(dot(u, v), -1.0, 1.0)));
}

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::kOmnidirectional:
      return "omnidirectional";
    case Pattern::kCardioid:
      return "cardioid";
    case Pattern::kHypercardioid:
      return "hypercardioid";
  }
  return "omnidirectional";
}

Pattern pattern_from_string(std::string_view name) {
  if (name == "omnidirectional" || name == "omni") return Pattern::kOmnidirectional;
  if (name == "cardioid") return Pattern::kCardioid;
  if (name == "hypercardioid") return Pattern::kHypercardioid;
  throw InvalidArgument("unknown directivity pattern '" + std::string(name) + "'");
}

MicArray tetrahedral_array(const Vec3& center) {
  static constexpr std::array<Direction, 4> kAngles = {
      Direction{45.0, 35.0}, Direction{-45.0, -35.0}, Direction{135.0, -35.0},
      Direction{-135.0, 35.0}};
  MicArray array{center, {}};
  for (const auto& d : kAngles) {
    array.capsules.push_back({d, kTetrahedralRadius, Pattern::kHypercardioid});
  }
  return array;
}

MicArray omni_array(const Vec3& center) {
  return {center, {CapsuleSpec{{0.0, 0.0}, 0.0, Pattern::kOmnidirectional}}};
}

CylinderProjection project_doa_circular(const Vec3& doa, const Vec3& array_center, double radius,
                                        double height) {
  if (!(radius > 0.0)) throw InvalidArgument("cylinder radius must be > 0");
  const double horiz = std::hypot(doa.x, doa.y);
  if (horiz <= 1e-12) throw NoIntersection("vertical DoA never meets the trajectory cylinder");
  const double t = radius / horiz;
  const Vec3 hit = array_center + t * doa;
  return {{hit.x, hit.y, height}, std::abs(hit.z - height)};
}

Vec3 project_doa_linear(const Vec3& doa, const Vec3& array_center, const Vec3& a, const Vec3& b) {
  const Vec3 seg = b - a;
  if (norm(seg) <= 0.0) throw InvalidArgument("segment endpoints must be distinct");

  auto ray_distance = [&](const Vec3& q) {
    const double t = std::max(0.0, dot(q - array_center, doa) / dot(doa, doa));
    return distance(array_center + t * doa, q);
  };

  // Convex problem over t >= 0, s in [0, 1]: the minimum is the interior
  // stationary point or lies on one of the three boundary edges.
  std::vector<double> candidates;
  double t = 0.0;
  double s = 0.0;
  if (line_line_params(array_center, doa, a, seg, t, s) && t >= 0.0 && s >= 0.0 && s <= 1.0) {
    candidates.push_back(s);
  }
  candidates.push_back(0.0);
  candidates.push_back(1.0);
  candidates.push_back(std::clamp(dot(array_center - a, seg) / dot(seg, seg), 0.0, 1.0));

  Vec3 best = a;
  double best_dist = std::numeric_limits<double>::infinity();
  double best_center_dist = std::numeric_limits<double>::infinity();
  for (double cand : candidates) {
    const Vec3 q = a + cand * seg;
    const double d = ray_distance(q);
    const double cd = distance(q, array_center);
    if (d < best_dist - 1e-12 || (d <= best_dist + 1e-12 && cd < best_center_dist)) {
      best = q;
      best_dist = d;
      best_center_dist = cd;
    }
  }
  return best;
}

std::vector<TrajectorySample> sample_trajectory(const Trajectory& traj, const Vec3& array_center,
                                                double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("trajectory spacing must be > 0");
  if (const auto* circ = std::get_if<CircularPath>(&traj.path)) {
    return sample_circular(*circ, traj.height_index, array_center, spacing);
  }
  return sample_linear(std::get<LinearPath>(traj.path), array_center, spacing);
}

}  // namespace srirforge
