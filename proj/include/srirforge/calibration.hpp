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

#ifndef SRIRFORGE_CALIBRATION_HPP_
#define SRIRFORGE_CALIBRATION_HPP_

#include <span>
#include <vector>

#include "srirforge/geometry.hpp"
#include "srirforge/ism.hpp"

namespace srirforge {

// Levels below this are clamped; a pure impulse decays to the floor.
inline constexpr double kEdcFloorDb = -300.0;

struct EnergyDecayCurve {
  std::vector<double> values_db;
  double sample_rate = kDefaultSampleRate;
};

struct FitRegion {
  double start_db = -5.0;
  double end_db = -25.0;
};

struct DecayFit {
  double rt60 = 0.0;
  double slope_db_per_s = 0.0;
  double intercept_db = 0.0;
  double r_squared = 0.0;
  std::size_t first_index = 0;
  std::size_t last_index = 0;
};

struct SabineEstimate {
  double absorption = 0.0;
  int max_order = 0;
};

struct CalibrationResult {
  double rt60 = 0.0;
  FitRegion fit_region;
  double fit_slope = 0.0;
  double absorption = 0.0;
  int max_order = 0;
  double r_squared = 0.0;
  std::vector<DecayFit> per_rir;
};

// Schroeder backward integration, normalized to 0 dB at the first sample.
EnergyDecayCurve energy_decay_curve(const Rir& rir);

DecayFit estimate_rt60(const EnergyDecayCurve& edc, FitRegion region = {});

// Sabine constant 24 ln(10) / c. max_order = ceil(c * rt60 / min(dims)).
SabineEstimate inverse_sabine(double rt60, const Vec3& dims,
                              double speed_of_sound = kDefaultSpeedOfSound);

CalibrationResult calibrate_room(std::span<const Rir> rirs, const Vec3& dims,
                                 FitRegion region = {},
                                 double speed_of_sound = kDefaultSpeedOfSound);

}  // namespace srirforge

#endif  // SRIRFORGE_CALIBRATION_HPP_
