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

#include "srirforge/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "srirforge/error.hpp"

namespace srirforge {
namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n) {
  return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer alloc_complex(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// FFTW planning is not thread-safe; execution with new-array functions is.
// Plans live for the life of the process.
PlanPair plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto real = alloc_real(n);
  auto spec = alloc_complex(n / 2 + 1);
  PlanPair p;
  const int size = static_cast<int>(n);
  p.forward = fftw_plan_dft_r2c_1d(size, real.get(), spec.get(), FFTW_ESTIMATE);
  p.inverse = fftw_plan_dft_c2r_1d(size, spec.get(), real.get(), FFTW_ESTIMATE);
  cache.emplace(n, p);
  return p;
}

std::size_t fft_size_for(std::size_t n) {
  std::size_t size = 1;
  while (size < n) size <<= 1;
  return std::max<std::size_t>(size, 2);
}

// Direct convolution is faster than an FFT for short filters.
bool prefer_direct(std::size_t a, std::size_t b) { return std::min(a, b) <= 32; }

std::vector<double> direct_convolve(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> convolve_many(std::span<const double> signal,
                                               std::span<const std::span<const double>> filters) {
  std::vector<std::vector<double>> outputs;
  if (filters.empty()) return outputs;
  std::size_t longest = 0;
  for (const auto& f : filters) longest = std::max(longest, f.size());
  if (signal.empty() || longest == 0) throw InvalidArgument("cannot convolve empty sequences");
  const std::size_t out_len = signal.size() + longest - 1;

  if (prefer_direct(signal.size(), longest)) {
    for (const auto& f : filters) {
      auto y = f.empty() ? std::vector<double>(out_len, 0.0) : direct_convolve(signal, f);
      y.resize(out_len, 0.0);
      outputs.push_back(std::move(y));
    }
    return outputs;
  }

  const std::size_t n = fft_size_for(out_len);
  const std::size_t bins = n / 2 + 1;
  const PlanPair plans = plans_for(n);
  auto time = alloc_real(n);
  auto sig_spec = alloc_complex(bins);
  auto work = alloc_complex(bins);

  std::fill(time.get(), time.get() + n, 0.0);
  std::copy(signal.begin(), signal.end(), time.get());
  fftw_execute_dft_r2c(plans.forward, time.get(), sig_spec.get());

  const double scale = 1.0 / static_cast<double>(n);
  for (const auto& f : filters) {
    std::fill(time.get(), time.get() + n, 0.0);
    std::copy(f.begin(), f.end(), time.get());
    fftw_execute_dft_r2c(plans.forward, time.get(), work.get());
    for (std::size_t k = 0; k < bins; ++k) {
      const double re = sig_spec[k][0] * work[k][0] - sig_spec[k][1] * work[k][1];
      const double im = sig_spec[k][0] * work[k][1] + sig_spec[k][1] * work[k][0];
      work[k][0] = re;
      work[k][1] = im;
    }
    fftw_execute_dft_c2r(plans.inverse, work.get(), time.get());
    std::vector<double> y(out_len);
    for (std::size_t i = 0; i < out_len; ++i) y[i] = time[i] * scale;
    outputs.push_back(std::move(y));
  }
  return outputs;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  const std::span<const double> filters[] = {b};
  return std::move(convolve_many(a, filters).front());
}

std::vector<double> resample(std::span<const double> x, double from_rate, double to_rate) {
  if (!(from_rate > 0.0) || !(to_rate > 0.0)) throw InvalidArgument("sample rates must be > 0");
  if (from_rate == to_rate) return {x.begin(), x.end()};
  if (x.empty()) return {};

  constexpr int kZeroCrossings = 32;
  const double ratio = to_rate / from_rate;
  const double cutoff = std::min(1.0, ratio) * 0.97;
  const double half_width = kZeroCrossings / cutoff;
  const auto out_len = static_cast<std::size_t>(std::floor(static_cast<double>(x.size()) * ratio));
  std::vector<double> y(out_len, 0.0);
  const auto n_in = static_cast<long>(x.size());

  for (std::size_t i = 0; i < out_len; ++i) {
    const double t = static_cast<double>(i) / ratio;
    const long lo = std::max(0L, static_cast<long>(std::ceil(t - half_width)));
    const long hi = std::min(n_in - 1, static_cast<long>(std::floor(t + half_width)));
    double acc = 0.0;
    for (long k = lo; k <= hi; ++k) {
      const double d = t - static_cast<double>(k);
      const double arg = std::numbers::pi * cutoff * d;
      const double sinc = std::abs(arg) < 1e-12 ? 1.0 : std::sin(arg) / arg;
      const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * d / half_width));
      acc += x[static_cast<std::size_t>(k)] * cutoff * sinc * window;
    }
    y[i] = acc;
  }
  return y;
}

double peak_abs(std::span<const double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  return peak;
}

}  // namespace srirforge
