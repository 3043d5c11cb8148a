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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "srirforge/error.hpp"
#include "srirforge/metrics.hpp"
#include "srirforge/util.hpp"
#include "support.hpp"

using namespace srirforge;
using doctest::Approx;

namespace {

FrameEvent fe(int cls, double az, double el = 0.0, int src = 0) {
  return {0, cls, src, sph_to_cart({az, el})};
}

// Exhaustive search over all injective assignments of the smaller side.
double brute_force_cost(const std::vector<double>& cost, std::size_t rows, std::size_t cols) {
  if (rows > cols) {
    std::vector<double> t(cost.size());
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = cost[r * cols + c];
    return brute_force_cost(t, cols, rows);
  }
  std::vector<std::size_t> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += cost[r * cols + perm[r]];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

FrameAnnotations random_annotations(Rng& rng, int frames, int max_per_frame) {
  FrameAnnotations rows;
  for (int f = 0; f < frames; ++f) {
    const int n = static_cast<int>(rng.uniform(0.0, max_per_frame + 1.0));
    for (int s = 0; s < n; ++s) {
      rows.push_back({f, static_cast<int>(rng.uniform(0.0, 4.0)), s, static_cast<int>(rng.uniform(-180.0, 180.0)),
                      static_cast<int>(rng.uniform(-60.0, 60.0))});
    }
  }
  return rows;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("frame matching picks the minimum total error") {
  // Greedy would pair 0 with 5 and leave 1 with 85; the optimum crosses.
  const std::vector<FrameEvent> refs{fe(2, 0.0), fe(2, 10.0)};
  const std::vector<FrameEvent> preds{fe(2, 5.0), fe(2, -5.0)};
  const FrameMatch m = match_frame(refs, preds);
  REQUIRE(m.pairs.size() == 2);
  double total = 0.0;
  for (const auto& p : m.pairs) total += p.error_deg;
  CHECK(total == Approx(10.0));
  CHECK(m.unmatched_refs.empty());
  CHECK(m.unmatched_preds.empty());

  // Classes never cross-match.
  const std::vector<FrameEvent> other{fe(3, 0.0)};
  const FrameMatch none = match_frame(refs, other);
  CHECK(none.pairs.empty());
  CHECK(none.unmatched_refs.size() == 2);
  CHECK(none.unmatched_preds.size() == 1);
}

TEST_CASE("assignment agrees with exhaustive search") {
  Rng rng(41);
  for (int trial = 0; trial < 400; ++trial) {
    const auto rows = static_cast<std::size_t>(rng.uniform(1.0, 6.0));
    const auto cols = static_cast<std::size_t>(rng.uniform(1.0, 6.0));
    std::vector<double> cost(rows * cols);
    for (auto& c : cost) c = rng.uniform(0.0, 180.0);
    const auto a = optimal_assignment(cost, rows, cols);
    REQUIRE(a.size() == rows);
    double s = 0.0;
    std::size_t used = 0;
    std::vector<bool> taken(cols, false);
    for (std::size_t r = 0; r < rows; ++r) {
      if (a[r] < 0) continue;
      CHECK_FALSE(taken[static_cast<std::size_t>(a[r])]);
      taken[static_cast<std::size_t>(a[r])] = true;
      s += cost[r * cols + static_cast<std::size_t>(a[r])];
      ++used;
    }
    CHECK(used == std::min(rows, cols));
    CHECK(s == Approx(brute_force_cost(cost, rows, cols)).epsilon(1e-12));
  }
}

TEST_CASE("perfect, empty and offset predictions") {
  const FrameAnnotations ref{{0, 1, 0, 30, 0}, {1, 1, 0, 31, 0}, {1, 4, 1, -90, 0}, {2, 4, 1, -91, 0}};
  const SeldScores perfect = compute_scores(ref, ref);
  CHECK(perfect.er20 == 0.0);
  CHECK(perfect.f20 == 1.0);
  CHECK(*perfect.le_cd == Approx(0.0));
  CHECK(perfect.lr_cd == 1.0);
  CHECK(cross_class_line(perfect) == "ER 0.00  F 100.0%  LE 0.0°  LR 100.0%");

  const SeldScores empty = compute_scores(ref, {});
  CHECK(empty.er20 == 1.0);
  CHECK(empty.f20 == 0.0);
  CHECK_FALSE(empty.le_cd.has_value());
  CHECK(empty.lr_cd == 0.0);
  CHECK(cross_class_line(empty).find("LE n/a") != std::string::npos);

  FrameAnnotations shifted = ref;
  for (auto& r : shifted) r.azimuth += 30;
  const SeldScores off = compute_scores(ref, shifted);
  CHECK(*off.le_cd == Approx(30.0));
  CHECK(off.f20 == 0.0);
  CHECK(off.lr_cd == 1.0);
  CHECK(off.er20 == 1.0);
  CHECK(off.substitutions == 4);

  CHECK_THROWS_AS(compute_scores({}, ref), UndefinedMetrics);
  CHECK_THROWS_AS(compute_scores(ref, ref, {20.0, 0}), InvalidArgument);
}

TEST_CASE("scores are bounded and order independent") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    FrameAnnotations ref = random_annotations(rng, 30, 3);
    if (ref.empty()) continue;
    FrameAnnotations pred = random_annotations(rng, 30, 3);
    const SeldScores s = compute_scores(ref, pred);
    CHECK(s.f20 >= 0.0);
    CHECK(s.f20 <= 1.0);
    CHECK(s.lr_cd >= 0.0);
    CHECK(s.lr_cd <= 1.0);
    CHECK(s.er20 >= 0.0);
    if (s.le_cd) {
      CHECK(*s.le_cd >= 0.0);
      CHECK(*s.le_cd <= 180.0);
    }
    std::reverse(pred.begin(), pred.end());
    std::reverse(ref.begin(), ref.end());
    const SeldScores r = compute_scores(ref, pred);
    CHECK(r.er20 == Approx(s.er20));
    CHECK(r.f20 == Approx(s.f20));
    CHECK(r.lr_cd == Approx(s.lr_cd));
    CHECK(r.le_cd.has_value() == s.le_cd.has_value());
    if (s.le_cd) CHECK(*r.le_cd == Approx(*s.le_cd));
  }
}

TEST_CASE("spurious predictions never help") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const FrameAnnotations ref = random_annotations(rng, 20, 2);
    if (ref.empty()) continue;
    FrameAnnotations pred = ref;
    const SeldScores before = compute_scores(ref, pred);
    // A spurious prediction of a class absent from the reference.
    pred.push_back({static_cast<int>(rng.uniform(0.0, 20.0)), 12, 2, 0, 0});
    const SeldScores after = compute_scores(ref, pred);
    CHECK(after.er20 >= before.er20);
    CHECK(after.f20 <= before.f20 + 1e-12);
  }
}

TEST_CASE("threshold only moves the detection scores") {
  Rng rng(44);
  const FrameAnnotations ref = random_annotations(rng, 40, 3);
  FrameAnnotations pred = ref;
  for (auto& r : pred) r.azimuth = round_azimuth(r.azimuth + rng.uniform(-40.0, 40.0));
  const SeldScores a = compute_scores(ref, pred, {20.0, 1});
  const SeldScores b = compute_scores(ref, pred, {40.0, 1});
  CHECK(*a.le_cd == Approx(*b.le_cd));
  CHECK(a.lr_cd == Approx(b.lr_cd));
  CHECK(b.f20 >= a.f20);
  CHECK(b.er20 <= a.er20);
}

TEST_CASE("segment pooling averages track directions") {
  // Two frames at 0 and 20 degrees pool to 10 degrees in one segment.
  const FrameAnnotations ref{{0, 1, 0, 0, 0}, {1, 1, 0, 20, 0}};
  const FrameAnnotations pred{{0, 1, 0, 10, 0}};
  const SeldScores seg = compute_scores(ref, pred, {20.0, 10});
  CHECK(seg.n_ref == 1);
  CHECK(*seg.le_cd == Approx(0.0).epsilon(1e-9));
  CHECK(seg.f20 == 1.0);
  const SeldScores frames = compute_scores(ref, pred, {20.0, 1});
  CHECK(frames.n_ref == 2);
  CHECK(frames.er20 == Approx(0.5));
}

TEST_CASE("report formats") {
  Rng rng(45);
  const FrameAnnotations ref = random_annotations(rng, 25, 3);
  const FrameAnnotations pred = random_annotations(rng, 25, 3);
  const SeldScores s = compute_scores(ref, pred);
  CHECK(parse_scores_csv(report(s, ReportFormat::kCsv)) == s);
  const std::string text = report(s, ReportFormat::kText);
  CHECK(text.rfind(cross_class_line(s), 0) == 0);
  CHECK_THROWS_AS(parse_scores_csv("scope,tp\nall,x\n"), ParseError);
}

}  // TEST_SUITE
