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

#include "srirforge/ism.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "srirforge/error.hpp"

namespace srirforge {
namespace {

struct AxisImage {
  double coord;
  int order;
  int near_count;  // reflections off the wall at 0
  int far_count;   // reflections off the wall at L
};

// One-dimensional image lattice: +x + 2nL (order 2|n|) and -x + 2nL
// (order |2n - 1|).
std::vector<AxisImage> axis_images(double src, double length, int max_order, double receiver,
                                   double max_distance) {
  std::vector<AxisImage> out;
  auto push = [&](double coord, int order, int near_count, int far_count) {
    if (std::abs(coord - receiver) <= max_distance) out.push_back({coord, order, near_count, far_count});
  };
  push(src, 0, 0, 0);
  for (int j = 1; j <= max_order; ++j) {
    if (j % 2 == 1) {
      const int n_pos = (j + 1) / 2;
      push(-src + 2.0 * n_pos * length, j, n_pos - 1, n_pos);
      const int n_neg = (1 - j) / 2;
      push(-src + 2.0 * n_neg * length, j, 1 - n_neg, -n_neg);
    } else {
      const int n = j / 2;
      push(src + 2.0 * n * length, j, n, n);
      push(src - 2.0 * n * length, j, n, n);
    }
  }
  return out;
}

}  // namespace

void ShoeboxRoom::validate() const {
  if (!is_finite(dims) || !(dims.x > 0.0 && dims.y > 0.0 && dims.z > 0.0)) {
    throw InvalidArgument("room dimensions must be positive and finite");
  }
  if (!(absorption >= 0.0 && absorption <= 1.0)) throw InvalidArgument("absorption must lie in [0, 1]");
  if (max_order < 0) throw InvalidArgument("max_order must be >= 0");
  if (!(speed_of_sound > 0.0)) throw InvalidArgument("speed of sound must be > 0");
  if (!(dc_cutoff_hz >= 0.0 && std::isfinite(dc_cutoff_hz))) throw InvalidArgument("DC cutoff must be >= 0");
}

std::vector<ImageSource> enumerate_images_within(const ShoeboxRoom& room, const Vec3& source,
                                                 int max_order, const Vec3& receiver,
                                                 double max_distance) {
  room.validate();
  if (max_order < 0) throw InvalidArgument("max_order must be >= 0");
  if (!room.contains(source)) throw InvalidArgument("source must lie strictly inside the room");

  const auto xs = axis_images(source.x, room.dims.x, max_order, receiver.x, max_distance);
  const auto ys = axis_images(source.y, room.dims.y, max_order, receiver.y, max_distance);
  const auto zs = axis_images(source.z, room.dims.z, max_order, receiver.z, max_distance);
  const double max_d2 = max_distance * max_distance;

  std::vector<ImageSource> images;
  for (const auto& ix : xs) {
    const double dx = ix.coord - receiver.x;
    for (const auto& iy : ys) {
      if (ix.order + iy.order > max_order) continue;
      const double dy = iy.coord - receiver.y;
      for (const auto& iz : zs) {
        const int order = ix.order + iy.order + iz.order;
        if (order > max_order) continue;
        const double dz = iz.coord - receiver.z;
        if (dx * dx + dy * dy + dz * dz > max_d2) continue;
        images.push_back({{ix.coord, iy.coord, iz.coord},
                          {ix.near_count, ix.far_count, iy.near_count, iy.far_count,
                           iz.near_count, iz.far_count},
                          order});
      }
    }
  }
  return images;
}

std::vector<ImageSource> enumerate_images(const ShoeboxRoom& room, const Vec3& source,
                                          int max_order) {
  return enumerate_images_within(room, source, max_order, source,
                                 std::numeric_limits<double>::infinity());
}

double image_amplitude(const ImageSource& img, const Vec3& receiver, double absorption) {
  const double d = distance(img.position, receiver);
  if (!(d > 0.0)) throw InvalidArgument("receiver coincides with an image source");
  if (img.total_order == 0) return 1.0 / (4.0 * std::numbers::pi * d);
  const double beta = std::sqrt(std::max(0.0, 1.0 - absorption));
  return std::pow(beta, img.total_order) / (4.0 * std::numbers::pi * d);
}

double directivity_gain(Pattern pattern, double incidence_angle_deg) {
  double a = 1.0;
  switch (pattern) {
    case Pattern::kOmnidirectional:
      return 1.0;
    case Pattern::kCardioid:
      a = 0.5;
      break;
    case Pattern::kHypercardioid:
      a = 0.25;
      break;
  }
  return a + (1.0 - a) * std::cos(deg_to_rad(incidence_angle_deg));
}

void deposit_arrival(std::span<double> out, double delay, double amplitude) {
  constexpr int kHalf = kKernelTaps / 2;
  const auto length = static_cast<long>(out.size());
  const long n0 = static_cast<long>(std::floor(delay));
  if (n0 - kHalf >= length || n0 + kHalf < 0) return;

  // x = n - delay runs over x0 + m; sin(pi (x0 + m)) = (-1)^m sin(pi x0) and
  // the window phase advances by a fixed rotation per tap.
  const double x0 = static_cast<double>(n0) - delay;
  const double sin_x0 = std::sin(std::numbers::pi * x0);
  const double w_step = 2.0 * std::numbers::pi / kKernelTaps;
  const std::complex<double> rot = std::polar(1.0, w_step);
  std::complex<double> phase = std::polar(1.0, w_step * (x0 - kHalf));

  for (int m = -kHalf; m <= kHalf; ++m, phase *= rot) {
    const long n = n0 + m;
    if (n < 0 || n >= length) continue;
    const double x = x0 + m;
    double sinc;
    if (std::abs(x) < 1e-12) {
      sinc = 1.0;
    } else {
      const double s = (m % 2 == 0) ? sin_x0 : -sin_x0;
      sinc = s / (std::numbers::pi * x);
    }
    const double window = 0.5 * (1.0 + phase.real());
    out[static_cast<std::size_t>(n)] += amplitude * sinc * window;
  }
}

Rir render_images(std::span<const ImageSource> images, const ShoeboxRoom& room,
                  const Vec3& capsule_position, const CapsuleSpec& capsule, double sample_rate,
                  int length) {
  if (length <= 0) throw InvalidArgument("RIR length must be > 0");
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be > 0");
  Rir rir{std::vector<double>(static_cast<std::size_t>(length), 0.0), sample_rate};
  const Vec3 axis = capsule.axis();
  const bool omni = capsule.pattern == Pattern::kOmnidirectional;
  for (const auto& img : images) {
    const double amp = image_amplitude(img, capsule_position, room.absorption);
    if (amp == 0.0) continue;
    const Vec3 path = img.position - capsule_position;
    const double d = norm(path);
    double gain = 1.0;
    if (!omni) {
      const double cosang = std::clamp(dot(axis, path) / d, -1.0, 1.0);
      gain = directivity_gain(capsule.pattern, rad_to_deg(std::acos(cosang)));
    }
    deposit_arrival(rir.samples, d / room.speed_of_sound * sample_rate, amp * gain);
  }
  if (room.dc_cutoff_hz > 0.0) {
    if (room.dc_cutoff_hz >= sample_rate / 2.0) throw InvalidArgument("DC cutoff must be below Nyquist");
    const double r = std::exp(-2.0 * std::numbers::pi * room.dc_cutoff_hz / sample_rate);
    double prev_in = 0.0, prev_out = 0.0;
    for (auto& v : rir.samples) {
      const double out = v - prev_in + r * prev_out;
      prev_in = v;
      prev_out = out;
      v = out;
    }
  }
  return rir;
}

Rir render_rir(const ShoeboxRoom& room, const Vec3& source, const Vec3& capsule_position,
               const CapsuleSpec& capsule, double sample_rate, int length) {
  if (length <= 0) throw InvalidArgument("RIR length must be > 0");
  const double reach = (length + kKernelTaps) / sample_rate * room.speed_of_sound;
  const auto images =
      enumerate_images_within(room, source, room.max_order, capsule_position, reach);
  return render_images(images, room, capsule_position, capsule, sample_rate, length);
}

Srir render_srir(const ShoeboxRoom& room, const Vec3& source, const MicArray& array,
                 double sample_rate, int length) {
  if (array.capsules.empty()) throw InvalidArgument("microphone array has no capsules");
  if (!room.contains(array.center)) throw InvalidArgument("array center must lie inside the room");
  if (length <= 0) throw InvalidArgument("RIR length must be > 0");

  double max_offset = 0.0;
  for (const auto& c : array.capsules) max_offset = std::max(max_offset, c.offset_radius);
  const double reach = (length + kKernelTaps) / sample_rate * room.speed_of_sound + max_offset;
  const auto images = enumerate_images_within(room, source, room.max_order, array.center, reach);

  Srir srir;
  srir.source_position = source;
  srir.doa = normalize(source - array.center);
  srir.channels.reserve(array.capsules.size());
  for (std::size_t i = 0; i < array.capsules.size(); ++i) {
    srir.channels.push_back(render_images(images, room, array.capsule_position(i),
                                          array.capsules[i], sample_rate, length));
  }
  return srir;
}

}  // namespace srirforge
