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

#ifndef SRIRFORGE_ISM_HPP_
#define SRIRFORGE_ISM_HPP_

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "srirforge/geometry.hpp"

namespace srirforge {

inline constexpr double kDefaultSpeedOfSound = 343.0;
inline constexpr double kDefaultSampleRate = 24000.0;
inline constexpr int kDefaultSrirLength = 7200;
inline constexpr int kKernelTaps = 81;
// Cutoff of the first-order DC blocker applied to every render. Image sums
// build up a spurious 0 Hz component that inflates the late decay.
inline constexpr double kDefaultDcCutoffHz = 20.0;

struct ShoeboxRoom {
  Vec3 dims;
  double absorption = 0.0;
  int max_order = 0;
  double speed_of_sound = kDefaultSpeedOfSound;
  double dc_cutoff_hz = kDefaultDcCutoffHz;  // 0 renders raw

  // Throws InvalidArgument when any field is out of range.
  void validate() const;
  bool contains(const Vec3& p) const {
    return p.x > 0.0 && p.y > 0.0 && p.z > 0.0 && p.x < dims.x && p.y < dims.y && p.z < dims.z;
  }
};

// Wall order in `reflections`: x=0, x=Lx, y=0, y=Ly, z=0, z=Lz.
struct ImageSource {
  Vec3 position;
  std::array<int, 6> reflections{};
  int total_order = 0;
};

std::vector<ImageSource> enumerate_images(const ShoeboxRoom& room, const Vec3& source,
                                          int max_order);

// Same lattice, restricted to images no farther than `max_distance` from
// `receiver`.
std::vector<ImageSource> enumerate_images_within(const ShoeboxRoom& room, const Vec3& source,
                                                 int max_order, const Vec3& receiver,
                                                 double max_distance);

// beta^order / (4 pi d) with beta = sqrt(1 - absorption).
double image_amplitude(const ImageSource& img, const Vec3& receiver, double absorption);

// a + (1 - a) cos(angle) with a = 1, 0.5, 0.25 for omni, cardioid and
// hypercardioid.
double directivity_gain(Pattern pattern, double incidence_angle_deg);

struct Rir {
  std::vector<double> samples;
  double sample_rate = kDefaultSampleRate;

  std::size_t length() const { return samples.size(); }
};

struct Srir {
  std::vector<Rir> channels;
  Vec3 doa;
  Vec3 source_position;

  std::size_t length() const { return channels.empty() ? 0 : channels.front().length(); }
  double sample_rate() const { return channels.empty() ? kDefaultSampleRate : channels.front().sample_rate; }
};

// Adds an 81-tap Hann-windowed sinc centred on fractional sample `delay`.
void deposit_arrival(std::span<double> out, double delay, double amplitude);

// Renders an explicit image set; render_rir is this over the room's lattice.
Rir render_images(std::span<const ImageSource> images, const ShoeboxRoom& room,
                  const Vec3& capsule_position, const CapsuleSpec& capsule, double sample_rate,
                  int length);

Rir render_rir(const ShoeboxRoom& room, const Vec3& source, const Vec3& capsule_position,
               const CapsuleSpec& capsule, double sample_rate = kDefaultSampleRate,
               int length = kDefaultSrirLength);

Srir render_srir(const ShoeboxRoom& room, const Vec3& source, const MicArray& array,
                 double sample_rate = kDefaultSampleRate, int length = kDefaultSrirLength);

}  // namespace srirforge

#endif  // SRIRFORGE_ISM_HPP_
