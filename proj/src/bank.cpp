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

#include "srirforge/bank.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>

#include "srirforge/calibration.hpp"
#include "srirforge/error.hpp"
#include "srirforge/util.hpp"
#include "srirforge/wav.hpp"

namespace srirforge {
namespace {

using nlohmann::json;

constexpr int kManifestVersion = 1;

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(std::string(what) + " must be [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::string format_point(const Vec3& p) {
  std::ostringstream ss;
  ss << "(" << p.x << ", " << p.y << ", " << p.z << ")";
  return ss.str();
}

json spec_to_json_value(const RoomSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["dims"] = vec_to_json(spec.dims);
  j["array_center"] = vec_to_json(spec.array_center);
  if (spec.rt60_target) {
    j["rt60"] = *spec.rt60_target;
  } else {
    j["absorption"] = spec.absorption;
    j["max_order"] = spec.max_order;
  }
  j["speed_of_sound"] = spec.speed_of_sound;
  j["dc_cutoff_hz"] = spec.dc_cutoff_hz;
  j["sample_rate"] = spec.sample_rate;
  j["srir_length"] = spec.srir_length;
  j["spacing_deg"] = spec.spacing_deg;
  json groups = json::array();
  for (const auto& g : spec.groups) {
    json gj;
    if (g.kind == TrajectoryGroup::Kind::kCircular) {
      gj["type"] = "circular";
      gj["radius"] = g.radius;
      gj["center_offset"] = json::array({g.center_dx, g.center_dy});
    } else {
      gj["type"] = "linear";
      gj["start"] = vec_to_json(g.start);
      gj["end"] = vec_to_json(g.end);
    }
    gj["heights"] = g.heights;
    groups.push_back(std::move(gj));
  }
  j["trajectory_groups"] = std::move(groups);
  return j;
}

RoomSpec spec_from_json_value(const json& j) {
  RoomSpec spec;
  try {
    spec.name = j.at("name").get<std::string>();
    spec.dims = vec_from_json(j.at("dims"), "dims");
    spec.array_center = vec_from_json(j.at("array_center"), "array_center");
    if (j.contains("rt60")) {
      spec.rt60_target = j["rt60"].get<double>();
    } else {
      spec.absorption = j.at("absorption").get<double>();
      spec.max_order = j.at("max_order").get<int>();
    }
    spec.speed_of_sound = j.value("speed_of_sound", kDefaultSpeedOfSound);
    spec.dc_cutoff_hz = j.value("dc_cutoff_hz", kDefaultDcCutoffHz);
    spec.sample_rate = j.value("sample_rate", kDefaultSampleRate);
    spec.srir_length = j.value("srir_length", kDefaultSrirLength);
    spec.spacing_deg = j.value("spacing_deg", 1.0);
    for (const auto& gj : j.value("trajectory_groups", json::array())) {
      TrajectoryGroup g;
      const auto type = gj.at("type").get<std::string>();
      if (type == "circular") {
        g.kind = TrajectoryGroup::Kind::kCircular;
        g.radius = gj.at("radius").get<double>();
        if (gj.contains("center_offset")) {
          const auto& off = gj["center_offset"];
          if (!off.is_array() || off.size() != 2) throw ConfigError("center_offset must be [dx, dy]");
          g.center_dx = off[0].get<double>();
          g.center_dy = off[1].get<double>();
        }
        g.heights = gj.at("heights").get<std::vector<double>>();
      } else if (type == "linear") {
        g.kind = TrajectoryGroup::Kind::kLinear;
        auto read_point = [&](const char* key) {
          const auto& p = gj.at(key);
          if (p.is_array() && p.size() == 2) return Vec3{p[0].get<double>(), p[1].get<double>(), 0.0};
          return vec_from_json(p, key);
        };
        g.start = read_point("start");
        g.end = read_point("end");
        if (gj.contains("heights")) {
          g.heights = gj["heights"].get<std::vector<double>>();
        } else {
          if (gj.at("start").size() != 3) throw ConfigError("linear group needs 3-D endpoints or heights");
          g.heights = {};
        }
      } else {
        throw ConfigError("unknown trajectory type '" + type + "'");
      }
      spec.groups.push_back(std::move(g));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid room spec: ") + e.what());
  }
  if (spec.name.empty()) throw ConfigError("room spec needs a name");
  if (spec.name.find_first_of("/\\_ ") != std::string::npos) {
    throw ConfigError("room name must not contain '/', '\\', '_' or spaces");
  }
  if (spec.sample_rate <= 0.0 || spec.srir_length <= 0) throw ConfigError("sample_rate and srir_length must be > 0");
  if (!(spec.spacing_deg > 0.0)) throw ConfigError("spacing_deg must be > 0");
  return spec;
}

std::vector<double> quantize_to_float(std::vector<double> v) {
  for (auto& s : v) s = static_cast<double>(static_cast<float>(s));
  return v;
}

Srir render_entry(const SrirBank& bank, std::size_t i) {
  const MicArray array = tetrahedral_array(bank.spec.array_center);
  Srir srir = render_srir(bank.room, bank.entries[i].position, array, bank.spec.sample_rate,
                          bank.spec.srir_length);
  for (auto& ch : srir.channels) ch.samples = quantize_to_float(std::move(ch.samples));
  srir.doa = bank.entries[i].doa;
  return srir;
}

Srir srir_from_audio(const Audio& audio, const BankEntry& entry, const std::string& origin) {
  if (audio.channel_count() != 4) throw LoadError(origin + ": expected 4 channels");
  Srir srir;
  srir.doa = entry.doa;
  srir.source_position = entry.position;
  for (const auto& ch : audio.channels) srir.channels.push_back({ch, audio.sample_rate});
  return srir;
}

SrirBank bank_from_manifest(const std::filesystem::path& dir) {
  const auto path = dir / kManifestName;
  std::string text;
  try {
    text = read_file(path);
  } catch (const LoadError&) {
    throw LoadError("missing bank manifest " + path.string());
  }
  SrirBank bank;
  try {
    const json j = json::parse(text);
    if (j.at("format_version").get<int>() != kManifestVersion) {
      throw LoadError("unsupported manifest version in " + path.string());
    }
    bank.spec = spec_from_json_value(j.at("room"));
    const auto& resolved = j.at("resolved");
    bank.room.dims = bank.spec.dims;
    bank.room.absorption = resolved.at("absorption").get<double>();
    bank.room.max_order = resolved.at("max_order").get<int>();
    bank.room.speed_of_sound = resolved.at("speed_of_sound").get<double>();
    bank.room.dc_cutoff_hz = bank.spec.dc_cutoff_hz;
    for (const auto& t : j.at("traces")) {
      bank.traces.push_back({t.at("group").get<int>(), t.at("height").get<int>(),
                             t.at("circular").get<bool>(), t.at("step_deg").get<double>(),
                             t.at("first").get<std::size_t>(), t.at("count").get<std::size_t>()});
    }
    for (const auto& e : j.at("entries")) {
      BankEntry entry;
      entry.file = e.at("file").get<std::string>();
      entry.group = e.at("group").get<int>();
      entry.height = e.at("height").get<int>();
      entry.index = e.at("index").get<int>();
      entry.position = vec_from_json(e.at("position"), "position");
      entry.doa = vec_from_json(e.at("doa"), "doa");
      entry.sha256 = e.at("sha256").get<std::string>();
      bank.entries.push_back(std::move(entry));
    }
    bank.checksum = j.at("checksum").get<std::string>();
  } catch (const json::exception& e) {
    throw LoadError("corrupt bank manifest " + path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw LoadError("corrupt bank manifest " + path.string() + ": " + e.what());
  }
  if (bank.compute_checksum() != bank.checksum) {
    throw IntegrityError("bank checksum mismatch in " + path.string());
  }
  return bank;
}

}  // namespace

std::vector<Trajectory> RoomSpec::trajectories() const {
  std::vector<Trajectory> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& group = groups[g];
    const auto gi = static_cast<int>(g);
    if (group.kind == TrajectoryGroup::Kind::kCircular) {
      for (std::size_t h = 0; h < group.heights.size(); ++h) {
        out.push_back({CircularPath{group.radius, group.heights[h], group.center_dx, group.center_dy}, gi,
                       static_cast<int>(h)});
      }
    } else if (group.heights.empty()) {
      out.push_back({LinearPath{group.start, group.end}, gi, 0});
    } else {
      for (std::size_t h = 0; h < group.heights.size(); ++h) {
        Vec3 a = group.start;
        Vec3 b = group.end;
        a.z = b.z = group.heights[h];
        out.push_back({LinearPath{a, b}, gi, static_cast<int>(h)});
      }
    }
  }
  return out;
}

RoomSpec room_spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("room spec is not valid JSON: ") + e.what());
  }
  return spec_from_json_value(j);
}

std::string room_spec_to_json(const RoomSpec& spec) { return spec_to_json_value(spec).dump(2); }

RoomSpec load_room_spec(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const LoadError& e) {
    throw ConfigError(e.what());
  }
  try {
    return room_spec_from_json(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RoomSpec circular_preset(const std::string& name, const Vec3& dims, const Vec3& array_center,
                         double rt60) {
  RoomSpec spec;
  spec.name = name;
  spec.dims = dims;
  spec.array_center = array_center;
  spec.rt60_target = rt60;
  std::vector<double> heights;
  for (int h = -4; h <= 4; ++h) heights.push_back(array_center.z + 0.2 * h);
  for (double radius : {1.0, 2.0}) {
    TrajectoryGroup g;
    g.kind = TrajectoryGroup::Kind::kCircular;
    g.radius = radius;
    g.heights = heights;
    spec.groups.push_back(std::move(g));
  }
  return spec;
}

ShoeboxRoom resolve_room(const RoomSpec& spec) {
  ShoeboxRoom room;
  room.dims = spec.dims;
  room.speed_of_sound = spec.speed_of_sound;
  room.dc_cutoff_hz = spec.dc_cutoff_hz;
  if (spec.rt60_target) {
    const auto est = inverse_sabine(*spec.rt60_target, spec.dims, spec.speed_of_sound);
    room.absorption = est.absorption;
    room.max_order = est.max_order;
  } else {
    room.absorption = spec.absorption;
    room.max_order = spec.max_order;
  }
  room.validate();
  return room;
}

Srir SrirBank::srir(std::size_t i) const {
  if (i >= entries.size()) throw InvalidArgument("bank entry index out of range");
  if (!srirs_.empty()) return srirs_[i];
  if (directory_.empty()) throw InvalidArgument("bank has no rendered audio");
  const auto path = directory_ / entries[i].file;
  const std::string bytes = read_file(path);
  if (sha256_hex(bytes) != entries[i].sha256) throw IntegrityError("checksum mismatch for " + path.string());
  return srir_from_audio(decode_wav(bytes, path.string()), entries[i], path.string());
}

std::string SrirBank::compute_checksum() const {
  json j;
  j["room"] = spec_to_json_value(spec);
  j["resolved"] = {{"absorption", room.absorption},
                   {"max_order", room.max_order},
                   {"speed_of_sound", room.speed_of_sound}};
  json rows = json::array();
  for (const auto& e : entries) {
    rows.push_back(json::array({e.file, e.group, e.height, e.index, vec_to_json(e.position),
                                vec_to_json(e.doa), e.sha256}));
  }
  j["entries"] = std::move(rows);
  return sha256_hex(j.dump());
}

SrirBank plan_bank(const RoomSpec& spec) {
  if (!is_finite(spec.dims) || !(spec.dims.x > 0 && spec.dims.y > 0 && spec.dims.z > 0)) {
    throw InvalidArgument("room dimensions must be positive");
  }
  ShoeboxRoom probe{spec.dims, 0.0, 0, spec.speed_of_sound};
  if (!probe.contains(spec.array_center)) {
    throw InvalidArgument("array center " + format_point(spec.array_center) + " is outside the room");
  }

  SrirBank bank;
  bank.spec = spec;
  bank.room = resolve_room(spec);
  for (const auto& traj : spec.trajectories()) {
    const auto samples = sample_trajectory(traj, spec.array_center, spec.spacing_deg);
    TraceInfo info;
    info.group = traj.group_index;
    info.height = traj.height_index;
    info.circular = traj.is_circular();
    info.first = bank.entries.size();
    info.count = samples.size();
    double total_angle = 0.0;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
      total_angle += angular_distance(samples[k].doa, samples[k + 1].doa);
    }
    if (info.circular && samples.size() > 1) {
      total_angle += angular_distance(samples.back().doa, samples.front().doa);
      info.step_deg = total_angle / static_cast<double>(samples.size());
    } else {
      info.step_deg = samples.size() > 1 ? total_angle / static_cast<double>(samples.size() - 1) : 0.0;
    }
    for (const auto& s : samples) {
      if (!probe.contains(s.position)) {
        throw InfeasibleRoom("trajectory point " + format_point(s.position) + " (group " +
                             std::to_string(traj.group_index) + ", height " +
                             std::to_string(traj.height_index) + ", index " + std::to_string(s.index) +
                             ") lies outside the room");
      }
      if (distance(s.position, spec.array_center) <= 2.0 * kTetrahedralRadius) {
        throw InfeasibleRoom("trajectory point " + format_point(s.position) + " touches the array");
      }
      BankEntry entry;
      entry.group = traj.group_index;
      entry.height = traj.height_index;
      entry.index = s.index;
      entry.position = s.position;
      entry.doa = s.doa;
      entry.file = spec.name + "_" + std::to_string(entry.group) + "_" + std::to_string(entry.height) + "_" +
                   std::to_string(entry.index) + ".wav";
      bank.entries.push_back(std::move(entry));
    }
    bank.traces.push_back(info);
  }
  bank.checksum = bank.compute_checksum();
  return bank;
}

std::string encode_srir_wav(const Srir& srir) {
  Audio audio;
  audio.sample_rate = srir.sample_rate();
  for (const auto& ch : srir.channels) audio.channels.push_back(ch.samples);
  return encode_wav(audio, SampleFormat::kFloat32);
}

SrirBank build_bank(const RoomSpec& spec, int jobs, const ProgressFn& progress) {
  SrirBank bank = plan_bank(spec);
  std::vector<Srir> srirs(bank.size());
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  parallel_for(bank.size(), jobs, [&](std::size_t i) {
    srirs[i] = render_entry(bank, i);
    bank.entries[i].sha256 = sha256_hex(encode_srir_wav(srirs[i]));
    const std::size_t n = ++done;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(n, bank.size());
    }
  });
  bank.set_srirs(std::move(srirs));
  bank.checksum = bank.compute_checksum();
  return bank;
}

SrirBank render_bank_to_directory(const RoomSpec& spec, const std::filesystem::path& dir, int jobs,
                                  const ProgressFn& progress) {
  SrirBank bank = plan_bank(spec);
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / kManifestName);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  parallel_for(bank.size(), jobs, [&](std::size_t i) {
    const std::string bytes = encode_srir_wav(render_entry(bank, i));
    bank.entries[i].sha256 = sha256_hex(bytes);
    write_file(dir / bank.entries[i].file, bytes);
    const std::size_t n = ++done;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(n, bank.size());
    }
  });
  bank.checksum = bank.compute_checksum();
  write_file(dir / kManifestName, bank_manifest_json(bank));
  bank.set_directory(dir);
  return bank;
}

std::string bank_manifest_json(const SrirBank& bank) {
  json j;
  j["format_version"] = kManifestVersion;
  j["room"] = spec_to_json_value(bank.spec);
  j["resolved"] = {{"absorption", bank.room.absorption},
                   {"max_order", bank.room.max_order},
                   {"speed_of_sound", bank.room.speed_of_sound}};
  j["channels"] = 4;
  j["sample_rate"] = bank.spec.sample_rate;
  j["srir_length"] = bank.spec.srir_length;
  json traces = json::array();
  for (const auto& t : bank.traces) {
    traces.push_back({{"group", t.group},
                      {"height", t.height},
                      {"circular", t.circular},
                      {"step_deg", t.step_deg},
                      {"first", t.first},
                      {"count", t.count}});
  }
  j["traces"] = std::move(traces);
  json entries = json::array();
  for (const auto& e : bank.entries) {
    entries.push_back({{"file", e.file},
                       {"group", e.group},
                       {"height", e.height},
                       {"index", e.index},
                       {"position", vec_to_json(e.position)},
                       {"doa", vec_to_json(e.doa)},
                       {"sha256", e.sha256}});
  }
  j["entries"] = std::move(entries);
  j["checksum"] = bank.checksum;
  return j.dump(1);
}

void save_bank(const SrirBank& bank, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  SrirBank copy = bank;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    const std::string bytes = encode_srir_wav(bank.srir(i));
    copy.entries[i].sha256 = sha256_hex(bytes);
    write_file(dir / bank.entries[i].file, bytes);
  }
  copy.checksum = copy.compute_checksum();
  write_file(dir / kManifestName, bank_manifest_json(copy));
}

SrirBank open_bank(const std::filesystem::path& dir) {
  SrirBank bank = bank_from_manifest(dir);
  bank.set_directory(dir);
  return bank;
}

SrirBank load_bank(const std::filesystem::path& dir) {
  SrirBank bank = open_bank(dir);
  std::vector<Srir> srirs;
  srirs.reserve(bank.size());
  for (std::size_t i = 0; i < bank.size(); ++i) srirs.push_back(bank.srir(i));
  bank.set_directory({});
  bank.set_srirs(std::move(srirs));
  return bank;
}

}  // namespace srirforge
