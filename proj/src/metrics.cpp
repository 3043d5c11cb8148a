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

#include "srirforge/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "srirforge/error.hpp"

namespace srirforge {
namespace {

using FrameMap = std::map<int, std::vector<FrameEvent>>;

FrameMap group_by_frame(const std::vector<FrameEvent>& events, int segment_frames) {
  FrameMap frames;
  if (segment_frames <= 1) {
    for (const auto& e : events) frames[e.frame].push_back(e);
    return frames;
  }
  // Pool each (class, source) track inside a segment into one mean direction.
  std::map<int, std::map<std::pair<int, int>, Vec3>> pooled;
  for (const auto& e : events) pooled[e.frame / segment_frames][{e.class_id, e.source}] += e.doa;
  for (const auto& [segment, tracks] : pooled) {
    for (const auto& [key, sum] : tracks) {
      const double n = norm(sum);
      // Antipodal directions cancel; keep the track with an arbitrary axis.
      const Vec3 doa = n > 1e-12 ? sum * (1.0 / n) : Vec3{1.0, 0.0, 0.0};
      frames[segment].push_back({segment, key.first, key.second, doa});
    }
  }
  return frames;
}

std::string format_double(double v) { return fmt::format("{}", v); }

double parse_double(std::string_view s, long line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + std::string(s) + "'", line);
  }
  return v;
}

long parse_long(std::string_view s, long line) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError("bad integer '" + std::string(s) + "'", line);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

constexpr std::string_view kCsvHeader =
    "scope,tp,fp,fn,n_ref,n_matched,sum_angular_error,er20,f20,le_cd,lr_cd,threshold_deg,"
    "substitutions,deletions,insertions";

}  // namespace

std::vector<FrameEvent> to_frame_events(const FrameAnnotations& rows) {
  std::vector<FrameEvent> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back({r.frame, r.class_id, r.source,
                   sph_to_cart({static_cast<double>(r.azimuth), static_cast<double>(r.elevation)}, 1.0)});
  }
  return out;
}

std::vector<int> optimal_assignment(std::span<const double> cost, std::size_t rows, std::size_t cols) {
  if (cost.size() != rows * cols) throw InvalidArgument("cost matrix has the wrong size");
  std::vector<int> row_to_col(rows, -1);
  if (rows == 0 || cols == 0) return row_to_col;

  // Shortest augmenting path with potentials; needs n <= m, so transpose
  // when there are more rows than columns.
  const bool transpose = rows > cols;
  const std::size_t n = transpose ? cols : rows;
  const std::size_t m = transpose ? rows : cols;
  auto at = [&](std::size_t i, std::size_t j) {
    return transpose ? cost[(j - 1) * cols + (i - 1)] : cost[(i - 1) * cols + (j - 1)];
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = at(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    if (transpose) {
      row_to_col[j - 1] = static_cast<int>(p[j] - 1);
    } else {
      row_to_col[p[j] - 1] = static_cast<int>(j - 1);
    }
  }
  return row_to_col;
}

FrameMatch match_frame(std::span<const FrameEvent> refs, std::span<const FrameEvent> preds) {
  std::map<int, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_class;
  for (std::size_t i = 0; i < refs.size(); ++i) by_class[refs[i].class_id].first.push_back(i);
  for (std::size_t j = 0; j < preds.size(); ++j) by_class[preds[j].class_id].second.push_back(j);

  FrameMatch match;
  for (const auto& [cls, idx] : by_class) {
    const auto& [r, p] = idx;
    std::vector<double> cost(r.size() * p.size());
    for (std::size_t a = 0; a < r.size(); ++a) {
      for (std::size_t b = 0; b < p.size(); ++b) {
        cost[a * p.size() + b] = angular_distance(refs[r[a]].doa, preds[p[b]].doa);
      }
    }
    const auto assign = optimal_assignment(cost, r.size(), p.size());
    std::vector<char> pred_used(p.size(), 0);
    for (std::size_t a = 0; a < r.size(); ++a) {
      if (assign[a] < 0) {
        match.unmatched_refs.push_back(r[a]);
        continue;
      }
      const auto b = static_cast<std::size_t>(assign[a]);
      pred_used[b] = 1;
      match.pairs.push_back({r[a], p[b], cost[a * p.size() + b]});
    }
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (!pred_used[b]) match.unmatched_preds.push_back(p[b]);
    }
  }
  return match;
}

double ClassStats::f_score() const {
  const long denom = 2 * tp + fp + fn;
  return denom > 0 ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom) : 0.0;
}

std::optional<double> ClassStats::localization_error() const {
  if (n_matched == 0) return std::nullopt;
  return sum_angular_error / static_cast<double>(n_matched);
}

double ClassStats::localization_recall() const {
  return n_ref > 0 ? static_cast<double>(n_matched) / static_cast<double>(n_ref) : 0.0;
}

SeldScores compute_scores(const FrameAnnotations& ref, const FrameAnnotations& pred, const ScoreConfig& config) {
  if (ref.empty()) throw UndefinedMetrics("reference annotations are empty; metrics are undefined");
  if (config.segment_frames < 1) throw InvalidArgument("segment_frames must be >= 1");

  const FrameMap ref_frames = group_by_frame(to_frame_events(ref), config.segment_frames);
  const FrameMap pred_frames = group_by_frame(to_frame_events(pred), config.segment_frames);
  std::vector<int> frame_ids;
  for (const auto& [f, _] : ref_frames) frame_ids.push_back(f);
  for (const auto& [f, _] : pred_frames) frame_ids.push_back(f);
  std::sort(frame_ids.begin(), frame_ids.end());
  frame_ids.erase(std::unique(frame_ids.begin(), frame_ids.end()), frame_ids.end());

  SeldScores scores;
  scores.threshold_deg = config.threshold_deg;
  static const std::vector<FrameEvent> kEmpty;
  for (int f : frame_ids) {
    const auto ri = ref_frames.find(f);
    const auto pi = pred_frames.find(f);
    const auto& refs = ri == ref_frames.end() ? kEmpty : ri->second;
    const auto& preds = pi == pred_frames.end() ? kEmpty : pi->second;
    const FrameMatch match = match_frame(refs, preds);

    long frame_fp = 0;
    long frame_fn = 0;
    for (const auto& r : refs) ++scores.per_class[r.class_id].n_ref;
    for (const auto& pair : match.pairs) {
      auto& cs = scores.per_class[refs[pair.ref].class_id];
      ++cs.n_matched;
      cs.sum_angular_error += pair.error_deg;
      if (pair.error_deg <= config.threshold_deg) {
        ++cs.tp;
      } else {
        ++cs.fp;
        ++cs.fn;
        ++frame_fp;
        ++frame_fn;
      }
    }
    for (std::size_t j : match.unmatched_preds) {
      ++scores.per_class[preds[j].class_id].fp;
      ++frame_fp;
    }
    for (std::size_t i : match.unmatched_refs) {
      ++scores.per_class[refs[i].class_id].fn;
      ++frame_fn;
    }
    scores.substitutions += std::min(frame_fp, frame_fn);
    scores.deletions += std::max(0L, frame_fn - frame_fp);
    scores.insertions += std::max(0L, frame_fp - frame_fn);
    scores.n_ref += static_cast<long>(refs.size());
  }

  scores.er20 = static_cast<double>(scores.substitutions + scores.deletions + scores.insertions) /
                static_cast<double>(scores.n_ref);
  double f_sum = 0.0, lr_sum = 0.0, le_sum = 0.0;
  int present = 0, localized = 0;
  for (const auto& [cls, cs] : scores.per_class) {
    if (cs.n_ref == 0) continue;
    ++present;
    f_sum += cs.f_score();
    lr_sum += cs.localization_recall();
    if (const auto le = cs.localization_error()) {
      le_sum += *le;
      ++localized;
    }
  }
  scores.f20 = f_sum / present;
  scores.lr_cd = lr_sum / present;
  if (localized > 0) scores.le_cd = le_sum / localized;
  return scores;
}

std::string cross_class_line(const SeldScores& s) {
  const std::string le = s.le_cd ? fmt::format("{:.1f}°", *s.le_cd) : std::string("n/a");
  return fmt::format("ER {:.2f}  F {:.1f}%  LE {}  LR {:.1f}%", s.er20, 100.0 * s.f20, le, 100.0 * s.lr_cd);
}

std::string report(const SeldScores& s, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::kText) {
    out += cross_class_line(s) + "\n\n";
    out += fmt::format("{:>5}  {:>7}  {:>7}  {:>7}  {:>5}\n", "class", "F", "LE", "LR", "refs");
    for (const auto& [cls, cs] : s.per_class) {
      if (cs.n_ref == 0) continue;
      const auto le = cs.localization_error();
      out += fmt::format("{:>5}  {:>6.1f}%  {:>7}  {:>6.1f}%  {:>5}\n", cls, 100.0 * cs.f_score(),
                         le ? fmt::format("{:.1f}°", *le) : std::string("n/a"),
                         100.0 * cs.localization_recall(), cs.n_ref);
    }
    return out;
  }
  out += std::string(kCsvHeader) + "\n";
  long tp = 0, fp = 0, fn = 0, matched = 0;
  double err = 0.0;
  for (const auto& [cls, cs] : s.per_class) {
    tp += cs.tp;
    fp += cs.fp;
    fn += cs.fn;
    matched += cs.n_matched;
    err += cs.sum_angular_error;
  }
  out += fmt::format("all,{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", tp, fp, fn, s.n_ref, matched,
                     format_double(err), format_double(s.er20), format_double(s.f20),
                     s.le_cd ? format_double(*s.le_cd) : std::string(), format_double(s.lr_cd),
                     format_double(s.threshold_deg), s.substitutions, s.deletions, s.insertions);
  for (const auto& [cls, cs] : s.per_class) {
    const auto le = cs.localization_error();
    out += fmt::format("{},{},{},{},{},{},{},,{},{},{},,,,\n", cls, cs.tp, cs.fp, cs.fn, cs.n_ref, cs.n_matched,
                       format_double(cs.sum_angular_error), format_double(cs.f_score()),
                       le ? format_double(*le) : std::string(), format_double(cs.localization_recall()));
  }
  return out;
}

SeldScores parse_scores_csv(std::string_view csv) {
  SeldScores s;
  bool have_all = false;
  long line_no = 0;
  while (!csv.empty()) {
    const auto nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kCsvHeader) throw ParseError("unexpected score CSV header", line_no);
      continue;
    }
    const auto f = split(line);
    if (f.size() != 15) throw ParseError("score row needs 15 fields", line_no);
    if (f[0] == "all") {
      s.n_ref = parse_long(f[4], line_no);
      s.er20 = parse_double(f[7], line_no);
      s.f20 = parse_double(f[8], line_no);
      if (!f[9].empty()) s.le_cd = parse_double(f[9], line_no);
      s.lr_cd = parse_double(f[10], line_no);
      s.threshold_deg = parse_double(f[11], line_no);
      s.substitutions = parse_long(f[12], line_no);
      s.deletions = parse_long(f[13], line_no);
      s.insertions = parse_long(f[14], line_no);
      have_all = true;
    } else {
      ClassStats cs;
      cs.tp = parse_long(f[1], line_no);
      cs.fp = parse_long(f[2], line_no);
      cs.fn = parse_long(f[3], line_no);
      cs.n_ref = parse_long(f[4], line_no);
      cs.n_matched = parse_long(f[5], line_no);
      cs.sum_angular_error = parse_double(f[6], line_no);
      s.per_class[static_cast<int>(parse_long(f[0], line_no))] = cs;
    }
  }
  if (!have_all) throw ParseError("score CSV lacks the cross-class row");
  return s;
}

}  // namespace srirforge
