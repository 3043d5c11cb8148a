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

#ifndef SRIRFORGE_DSP_HPP_
#define SRIRFORGE_DSP_HPP_

#include <cmath>
#include <span>
#include <vector>

namespace srirforge {

// Full linear convolution (length a + b - 1) computed with FFTW.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

// Convolves one signal with several filters, transforming the signal once.
// Every output has length signal + max(filter) - 1.
std::vector<std::vector<double>> convolve_many(std::span<const double> signal,
                                               std::span<const std::span<const double>> filters);

// Band-limited resampling with a Hann-windowed sinc (32 zero crossings).
std::vector<double> resample(std::span<const double> x, double from_rate, double to_rate);

double peak_abs(std::span<const double> x);

inline double db_to_gain(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace srirforge

#endif  // SRIRFORGE_DSP_HPP_
