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

#include "srirforge/plot.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace srirforge {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 50.0;
constexpr double kMinDb = -80.0;

std::size_t decimation(std::size_t n, std::size_t max_rows) {
  return std::max<std::size_t>(1, (n + max_rows - 1) / std::max<std::size_t>(1, max_rows));
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string edc_csv(const EnergyDecayCurve& edc, const DecayFit& fit, std::size_t max_rows) {
  std::string out = "time_s,edc_db,fit_db\n";
  const std::size_t step = decimation(edc.values_db.size(), max_rows);
  for (std::size_t i = 0; i < edc.values_db.size(); i += step) {
    const double t = static_cast<double>(i) / edc.sample_rate;
    out += fmt::format("{:.6f},{:.4f},{:.4f}\n", t, edc.values_db[i], fit.intercept_db + fit.slope_db_per_s * t);
  }
  return out;
}

std::string edc_svg(const EnergyDecayCurve& edc, const DecayFit& fit, const FitRegion& region,
                    const std::string& title) {
  const double duration = static_cast<double>(edc.values_db.size()) / edc.sample_rate;
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  auto px = [&](double t) { return kMargin + plot_w * t / duration; };
  auto py = [&](double db) { return kMargin + plot_h * (std::clamp(db, kMinDb, 0.0) / kMinDb); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"25\" font-family=\"sans-serif\" font-size=\"14\">{3}</text>\n",
      kWidth, kHeight, kMargin, escape(title));
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                     kMargin, kMargin, plot_w, plot_h);
  for (int db = 0; db >= static_cast<int>(kMinDb); db -= 20) {
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{} dB</text>\n",
        kMargin - 4, py(db) + 3, db);
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{:.3f} s</text>\n",
      kMargin + plot_w, kHeight - kMargin + 14, duration);

  svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  const std::size_t step = decimation(edc.values_db.size(), 1000);
  for (std::size_t i = 0; i < edc.values_db.size(); i += step) {
    const double t = static_cast<double>(i) / edc.sample_rate;
    svg += fmt::format("{:.1f},{:.1f} ", px(t), py(edc.values_db[i]));
  }
  svg += "\"/>\n";

  for (double level : {region.start_db, region.end_db}) {
    svg += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
        kMargin, py(level), kMargin + plot_w, py(level));
  }
  // Fit line from t = 0 until it leaves the plotted range.
  const double t_end = std::min(duration, (kMinDb - fit.intercept_db) / fit.slope_db_per_s);
  svg += fmt::format(
      "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n",
      px(0.0), py(fit.intercept_db), px(std::max(0.0, t_end)),
      py(fit.intercept_db + fit.slope_db_per_s * std::max(0.0, t_end)));
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"crimson\">RT60 = {:.3f} s</text>\n",
      kMargin + plot_w - 150, kMargin + 20, fit.rt60);
  svg += "</svg>\n";
  return svg;
}

}  // namespace srirforge
