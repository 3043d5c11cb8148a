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

#include "srirforge/annotations.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "srirforge/error.hpp"
#include "srirforge/wav.hpp"

namespace srirforge {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

int round_azimuth(double azimuth_deg) {
  long az = std::lround(azimuth_deg);
  az = ((az + 180) % 360 + 360) % 360 - 180;
  return static_cast<int>(az);
}

int round_elevation(double elevation_deg) {
  const long el = std::lround(elevation_deg);
  return static_cast<int>(std::max(-90L, std::min(90L, el)));
}

std::string annotations_to_csv(const FrameAnnotations& rows) {
  std::string out;
  out.reserve(rows.size() * 20);
  for (const auto& r : rows) {
    out += std::to_string(r.frame) + "," + std::to_string(r.class_id) + "," + std::to_string(r.source) +
           "," + std::to_string(r.azimuth) + "," + std::to_string(r.elevation) + "\n";
  }
  return out;
}

FrameAnnotations annotations_from_csv(std::string_view text) {
  FrameAnnotations rows;
  long line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line_no == 1 && line.starts_with("frame")) continue;

    int fields[5];
    int count = 0;
    while (true) {
      const auto comma = line.find(',');
      const std::string_view field = trim(line.substr(0, comma));
      if (count == 5) throw ParseError("too many fields in annotation row", line_no);
      const auto res = std::from_chars(field.data(), field.data() + field.size(), fields[count]);
      if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || field.empty()) {
        throw ParseError("non-integer field '" + std::string(field) + "' in annotation row", line_no);
      }
      ++count;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (count != 5) throw ParseError("annotation row needs 5 fields", line_no);
    AnnotationRow row{fields[0], fields[1], fields[2], fields[3], fields[4]};
    if (row.frame < 0) throw ParseError("negative frame index", line_no);
    if (row.class_id < 0 || row.class_id >= kNumClasses) throw ParseError("class id out of range", line_no);
    if (row.azimuth < -180 || row.azimuth > 180) throw ParseError("azimuth out of range", line_no);
    if (row.elevation < -90 || row.elevation > 90) throw ParseError("elevation out of range", line_no);
    rows.push_back(row);
  }
  return rows;
}

FrameAnnotations read_annotations(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return annotations_from_csv(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace srirforge
