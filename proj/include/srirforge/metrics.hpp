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

#ifndef SRIRFORGE_METRICS_HPP_
#define SRIRFORGE_METRICS_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srirforge/annotations.hpp"
#include "srirforge/geometry.hpp"

namespace srirforge {

struct FrameEvent {
  int frame = 0;
  int class_id = 0;
  int source = 0;
  Vec3 doa;
};

std::vector<FrameEvent> to_frame_events(const FrameAnnotations& rows);

// Minimum-cost assignment of min(rows, cols) pairs. cost is row-major
// rows x cols. Returns, for every row, the matched column or -1.
std::vector<int> optimal_assignment(std::span<const double> cost, std::size_t rows, std::size_t cols);

struct MatchedPair {
  std::size_t ref = 0;
  std::size_t pred = 0;
  double error_deg = 0.0;
};

struct FrameMatch {
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> unmatched_refs;
  std::vector<std::size_t> unmatched_preds;
};

// Per class, a minimum-total-angular-distance assignment between references
// and predictions. Indices refer to the input spans.
FrameMatch match_frame(std::span<const FrameEvent> refs, std::span<const FrameEvent> preds);

struct ClassStats {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long n_ref = 0;
  long n_matched = 0;
  double sum_angular_error = 0.0;

  double f_score() const;
  std::optional<double> localization_error() const;
  double localization_recall() const;
  friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

struct SeldScores {
  double er20 = 0.0;
  double f20 = 0.0;
  std::optional<double> le_cd;  // empty when nothing was class-matched
  double lr_cd = 0.0;
  double threshold_deg = 20.0;
  long substitutions = 0;
  long deletions = 0;
  long insertions = 0;
  long n_ref = 0;
  std::map<int, ClassStats> per_class;

  friend bool operator==(const SeldScores&, const SeldScores&) = default;
};

struct ScoreConfig {
  double threshold_deg = 20.0;
  // 1 scores every 100 ms frame. Larger values pool frames into segments,
  // averaging each (class, source) track's DoA within the segment.
  int segment_frames = 1;
};

// Throws UndefinedMetrics when the reference is empty.
SeldScores compute_scores(const FrameAnnotations& ref, const FrameAnnotations& pred,
                          const ScoreConfig& config = {});

enum class ReportFormat { kText, kCsv };

// Text: one cross-class line (ER, F, LE, LR) followed by a per-class table.
// CSV: machine-readable; parse_scores_csv reads it back exactly.
std::string report(const SeldScores& scores, ReportFormat format);
std::string cross_class_line(const SeldScores& scores);
SeldScores parse_scores_csv(std::string_view csv);

}  // namespace srirforge

#endif  // SRIRFORGE_METRICS_HPP_
