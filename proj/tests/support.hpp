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

// Fixtures shared by the unit tests and the acceptance runner.

#ifndef SRIRFORGE_TESTS_SUPPORT_HPP_
#define SRIRFORGE_TESTS_SUPPORT_HPP_

#include <array>
#include <cmath>
#include <set>
#include <vector>
#include <filesystem>
#include <numbers>
#include <string>
#include <unistd.h>

#include "srirforge/bank.hpp"
#include "srirforge/ism.hpp"
#include "srirforge/util.hpp"
#include "srirforge/wav.hpp"

namespace srirforge::testing {

// Removes itself on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("srirforge_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path path_;
};

// Brute force: breadth-first mirroring across all six walls, an image's order
// being the depth at which it is first reached.
inline std::vector<ImageSource> mirror_oracle(const Vec3& dims, const Vec3& src, int max_order) {
  auto key = [](const Vec3& p) {
    return std::array<long long, 3>{std::llround(p.x * 1e6), std::llround(p.y * 1e6), std::llround(p.z * 1e6)};
  };
  std::set<std::array<long long, 3>> seen{key(src)};
  std::vector<ImageSource> out{{src, {}, 0}};
  std::vector<Vec3> frontier{src};
  for (int depth = 1; depth <= max_order; ++depth) {
    std::vector<Vec3> next;
    for (const Vec3& p : frontier) {
      for (int axis = 0; axis < 3; ++axis) {
        for (double wall : {0.0, dims[axis]}) {
          Vec3 q = p;
          q[axis] = 2.0 * wall - p[axis];
          if (seen.insert(key(q)).second) {
            next.push_back(q);
            out.push_back({q, {}, depth});
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

inline Vec3 random_unit(Rng& rng) {
  while (true) {
    const Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double n = norm(v);
    if (n > 0.1 && n <= 1.0) return v / n;
  }
}

// Writes `per_class` synthetic clips for each of `classes` labels: decaying
// tone bursts with class-specific pitch and lengths between 1 and 6 s.
inline void write_synthetic_corpus(const std::filesystem::path& dir, int classes, int per_class,
                                   std::uint64_t seed, double rate = 16000.0) {
  Rng rng(seed);
  for (int c = 0; c < classes; ++c) {
    const auto label = dir / ("class" + std::string(c < 10 ? "0" : "") + std::to_string(c));
    std::filesystem::create_directories(label);
    for (int k = 0; k < per_class; ++k) {
      const double seconds = rng.uniform(1.0, 6.0);
      const auto n = static_cast<std::size_t>(seconds * rate);
      const double f0 = 150.0 * (1.0 + c) + rng.uniform(-20.0, 20.0);
      Audio a;
      a.sample_rate = rate;
      a.channels.assign(1, std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        const double env = std::min(1.0, t / 0.01) * std::exp(-t / (0.4 * seconds));
        a.channels[0][i] = 0.5 * env * (std::sin(2.0 * std::numbers::pi * f0 * t) + 0.1 * rng.normal());
      }
      write_wav(label / ("clip" + std::to_string(k) + ".wav"), a, SampleFormat::kPcm16);
    }
  }
}

// A cheap room: one circular trace at array height, coarse spacing, short SRIRs.
inline RoomSpec small_circular_room(const std::string& name, const Vec3& dims, double spacing_deg,
                                    int srir_length = 2400) {
  RoomSpec spec;
  spec.name = name;
  spec.dims = dims;
  spec.array_center = {dims.x / 2.0, dims.y / 2.0, 1.5};
  spec.absorption = 0.7;
  spec.max_order = 2;
  spec.srir_length = srir_length;
  spec.spacing_deg = spacing_deg;
  TrajectoryGroup g;
  g.kind = TrajectoryGroup::Kind::kCircular;
  g.radius = 1.5;
  g.heights = {1.5};
  spec.groups.push_back(g);
  return spec;
}

}  // namespace srirforge::testing

#endif  // SRIRFORGE_TESTS_SUPPORT_HPP_
