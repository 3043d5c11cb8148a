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

#include "srirforge/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "srirforge/error.hpp"

namespace srirforge {

EnergyDecayCurve energy_decay_curve(const Rir& rir) {
  const std::size_t n = rir.samples.size();
  std::vector<double> tail(n, 0.0);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double v = rir.samples[i];
    if (!std::isfinite(v)) throw InvalidArgument("RIR contains non-finite samples");
    acc += v * v;
    tail[i] = acc;
  }
  if (n == 0 || !(acc > 0.0)) throw InvalidArgument("cannot integrate the decay of a silent RIR");

  EnergyDecayCurve edc{std::vector<double>(n), rir.sample_rate};
  const double total = tail[0];
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = tail[i] / total;
    double db = ratio > 0.0 ? 10.0 * std::log10(ratio) : kEdcFloorDb;
    db = std::max(db, kEdcFloorDb);
    // Rounding in the suffix sums can produce a tiny uptick.
    if (i > 0) db = std::min(db, prev);
    edc.values_db[i] = db;
    prev = db;
  }
  edc.values_db[0] = 0.0;
  return edc;
}

DecayFit estimate_rt60(const EnergyDecayCurve& edc, FitRegion region) {
  if (!(region.start_db > region.end_db)) {
    throw InvalidArgument("fit region start must be above its end");
  }
  const auto& v = edc.values_db;
  if (v.empty() || v.back() > region.end_db) {
    throw InsufficientDecay("energy decay never reaches " + std::to_string(region.end_db) + " dB");
  }

  double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  std::size_t first = v.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y = v[i];
    if (y > region.start_db || y < region.end_db) continue;
    const double x = static_cast<double>(i) / edc.sample_rate;
    n += 1.0;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    first = std::min(first, i);
    last = std::max(last, i);
  }
  if (n < 2.0) throw InsufficientDecay("fit region holds fewer than two samples");

  const double cov = sxy - sx * sy / n;
  const double var_x = sxx - sx * sx / n;
  const double var_y = syy - sy * sy / n;
  if (!(var_x > 0.0)) throw InsufficientDecay("fit region spans a single instant");
  const double slope = cov / var_x;
  if (!(slope < 0.0)) throw InsufficientDecay("energy decay slope is not negative");

  DecayFit fit;
  fit.slope_db_per_s = slope;
  fit.intercept_db = (sy - slope * sx) / n;
  fit.rt60 = -60.0 / slope;
  fit.r_squared = var_y > 0.0 ? (cov * cov) / (var_x * var_y) : 1.0;
  fit.first_index = first;
  fit.last_index = last;
  return fit;
}

SabineEstimate inverse_sabine(double rt60, const Vec3& dims, double speed_of_sound) {
  if (!(rt60 > 0.0)) throw InvalidArgument("rt60 must be > 0");
  if (!(dims.x > 0.0 && dims.y > 0.0 && dims.z > 0.0)) throw InvalidArgument("room dimensions must be > 0");
  if (!(speed_of_sound > 0.0)) throw InvalidArgument("speed of sound must be > 0");

  const double volume = dims.x * dims.y * dims.z;
  const double surface = 2.0 * (dims.x * dims.y + dims.y * dims.z + dims.x * dims.z);
  const double sabine = 24.0 * std::numbers::ln10 / speed_of_sound;
  const double alpha = sabine * volume / (surface * rt60);
  if (alpha >= 1.0) {
    throw InfeasibleRoom("RT60 of " + std::to_string(rt60) +
                         " s needs absorption >= 1 in this room (too small or too dead for Sabine)");
  }
  const double min_dim = std::min({dims.x, dims.y, dims.z});
  return {std::clamp(alpha, 0.0, 1.0),
          static_cast<int>(std::ceil(speed_of_sound * rt60 / min_dim))};
}

CalibrationResult calibrate_room(std::span<const Rir> rirs, const Vec3& dims, FitRegion region,
                                 double speed_of_sound) {
  if (rirs.empty()) throw InvalidArgument("calibration needs at least one RIR");
  CalibrationResult result;
  result.fit_region = region;
  for (std::size_t i = 0; i < rirs.size(); ++i) {
    try {
      result.per_rir.push_back(estimate_rt60(energy_decay_curve(rirs[i]), region));
    } catch (const InsufficientDecay& e) {
      throw InsufficientDecay("RIR " + std::to_string(i) + ": " + e.what());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("RIR " + std::to_string(i) + ": " + e.what());
    }
  }

  // Median by rt60; the reported slope and r^2 come from the same fit (or the
  // mean of the two middle fits for an even count).
  std::vector<const DecayFit*> order;
  for (const auto& f : result.per_rir) order.push_back(&f);
  std::sort(order.begin(), order.end(),
            [](const DecayFit* a, const DecayFit* b) { return a->rt60 < b->rt60; });
  const std::size_t mid = order.size() / 2;
  if (order.size() % 2 == 1) {
    result.rt60 = order[mid]->rt60;
    result.r_squared = order[mid]->r_squared;
  } else {
    result.rt60 = 0.5 * (order[mid - 1]->rt60 + order[mid]->rt60);
    result.r_squared = 0.5 * (order[mid - 1]->r_squared + order[mid]->r_squared);
  }
  result.fit_slope = -60.0 / result.rt60;

  const auto sabine = inverse_sabine(result.rt60, dims, speed_of_sound);
  result.absorption = sabine.absorption;
  result.max_order = sabine.max_order;
  return result;
}

}  // namespace srirforge
