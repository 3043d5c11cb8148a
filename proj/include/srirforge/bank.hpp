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

#ifndef SRIRFORGE_BANK_HPP_
#define SRIRFORGE_BANK_HPP_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "srirforge/geometry.hpp"
#include "srirforge/ism.hpp"

namespace srirforge {

// One trajectory group: a circular orbit or a linear trace, repeated at each
// listed height.
struct TrajectoryGroup {
  enum class Kind { kCircular, kLinear } kind = Kind::kCircular;
  double radius = 0.0;
  double center_dx = 0.0;
  double center_dy = 0.0;
  Vec3 start;
  Vec3 end;
  std::vector<double> heights;  // absolute z; linear traces override start.z/end.z
};

struct RoomSpec {
  std::string name;
  Vec3 dims;
  Vec3 array_center;
  std::optional<double> rt60_target;
  double absorption = 0.0;  // used when rt60_target is absent
  int max_order = 0;        // used when rt60_target is absent
  double speed_of_sound = kDefaultSpeedOfSound;
  double dc_cutoff_hz = kDefaultDcCutoffHz;
  double sample_rate = kDefaultSampleRate;
  int srir_length = kDefaultSrirLength;
  double spacing_deg = 1.0;
  std::vector<TrajectoryGroup> groups;

  // Expands groups x heights in (group, height) order.
  std::vector<Trajectory> trajectories() const;
};

// Parses/serializes the room-spec JSON schema documented in the README.
RoomSpec room_spec_from_json(const std::string& text);
std::string room_spec_to_json(const RoomSpec& spec);
RoomSpec load_room_spec(const std::filesystem::path& path);

// Two circular groups x nine heights, 360 points each at 1 degree.
RoomSpec circular_preset(const std::string& name, const Vec3& dims, const Vec3& array_center,
                         double rt60);

// Virtual room after calibration (or taken directly from the spec).
ShoeboxRoom resolve_room(const RoomSpec& spec);

struct TraceInfo {
  int group = 0;
  int height = 0;
  bool circular = false;
  double step_deg = 0.0;  // mean angle between consecutive samples
  std::size_t first = 0;  // index of the first entry
  std::size_t count = 0;
};

struct BankEntry {
  int group = 0;
  int height = 0;
  int index = 0;
  Vec3 position;
  Vec3 doa;
  std::string file;    // <room>_<group>_<height>_<index>.wav
  std::string sha256;  // of the encoded WAV, empty until rendered
};

class SrirBank {
 public:
  RoomSpec spec;
  ShoeboxRoom room;
  std::vector<TraceInfo> traces;
  std::vector<BankEntry> entries;
  std::string checksum;

  std::size_t size() const { return entries.size(); }
  bool has_audio() const { return !srirs_.empty() || !directory_.empty(); }

  // SRIR of entry i; read (and integrity-checked) from disk for banks opened
  // lazily.
  Srir srir(std::size_t i) const;

  void set_srirs(std::vector<Srir> srirs) { srirs_ = std::move(srirs); }
  const std::vector<Srir>& srirs() const { return srirs_; }
  void set_directory(std::filesystem::path dir) { directory_ = std::move(dir); }
  const std::filesystem::path& directory() const { return directory_; }

  // Recomputes the bank checksum from room metadata and entry digests.
  std::string compute_checksum() const;

 private:
  std::vector<Srir> srirs_;
  std::filesystem::path directory_;
};

// Samples every trajectory and resolves the room without rendering audio.
// Throws InfeasibleRoom naming the first sample point outside the room.
SrirBank plan_bank(const RoomSpec& spec);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

SrirBank build_bank(const RoomSpec& spec, int jobs = 1, const ProgressFn& progress = {});

// Renders straight to disk without holding every SRIR in memory; the
// manifest is written last. Returns the lazily opened bank.
SrirBank render_bank_to_directory(const RoomSpec& spec, const std::filesystem::path& dir,
                                  int jobs = 1, const ProgressFn& progress = {});

std::string encode_srir_wav(const Srir& srir);

inline constexpr const char* kManifestName = "manifest.json";

std::string bank_manifest_json(const SrirBank& bank);
void save_bank(const SrirBank& bank, const std::filesystem::path& dir);
// Eager load: every WAV is read and checked against the manifest.
SrirBank load_bank(const std::filesystem::path& dir);
// Lazy open: manifest only; SRIRs are read on demand.
SrirBank open_bank(const std::filesystem::path& dir);

}  // namespace srirforge

#endif  // SRIRFORGE_BANK_HPP_
