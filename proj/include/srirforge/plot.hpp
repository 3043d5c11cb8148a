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

#ifndef SRIRFORGE_PLOT_HPP_
#define SRIRFORGE_PLOT_HPP_

#include <string>

#include "srirforge/calibration.hpp"

namespace srirforge {

// `time_s,edc_db,fit_db` rows, one per EDC sample (decimated to at most
// `max_rows`).
std::string edc_csv(const EnergyDecayCurve& edc, const DecayFit& fit, std::size_t max_rows = 4000);

// Decay curve with the fit line and the fit region marked by dashed levels.
std::string edc_svg(const EnergyDecayCurve& edc, const DecayFit& fit, const FitRegion& region,
                    const std::string& title);

}  // namespace srirforge

#endif  // SRIRFORGE_PLOT_HPP_
