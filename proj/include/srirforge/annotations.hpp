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

#ifndef SRIRFORGE_ANNOTATIONS_HPP_
#define SRIRFORGE_ANNOTATIONS_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace srirforge {

inline constexpr int kNumClasses = 13;
inline constexpr double kFrameSeconds = 0.1;

// One `frame,class,source,azimuth,elevation` row; all integers, 100 ms
// frames, azimuth in [-180, 180) and elevation in [-90, 90] degrees.
struct AnnotationRow {
  int frame = 0;
  int class_id = 0;
  int source = 0;
  int azimuth = 0;
  int elevation = 0;

  friend bool operator==(const AnnotationRow&, const AnnotationRow&) = default;
};

using FrameAnnotations = std::vector<AnnotationRow>;

// Wraps to [-180, 180) after rounding to the nearest integer degree.
int round_azimuth(double azimuth_deg);
int round_elevation(double elevation_deg);

std::string annotations_to_csv(const FrameAnnotations& rows);
// Throws ParseError carrying the 1-based line number of the offending row.
// An optional header line starting with "frame" is skipped.
FrameAnnotations annotations_from_csv(std::string_view text);
FrameAnnotations read_annotations(const std::filesystem::path& path);

}  // namespace srirforge

#endif  // SRIRFORGE_ANNOTATIONS_HPP_
