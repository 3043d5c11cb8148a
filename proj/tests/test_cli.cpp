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
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <regex>
#include <string>

#include "srirforge/annotations.hpp"
#include "srirforge/bank.hpp"
#include "srirforge/mixer.hpp"
#include "srirforge/util.hpp"
#include "srirforge/wav.hpp"
#include "support.hpp"

using namespace srirforge;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string("\"") + SRIRFORGE_CLI + "\" " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

double printed(const std::string& text, const std::string& key) {
  std::smatch m;
  const std::regex re(key + " ([-0-9.]+)");
  REQUIRE(std::regex_search(text, m, re));
  return std::stod(m[1]);
}

void write_decay_dir(const fs::path& dir, double rt60, int count) {
  fs::create_directories(dir);
  const double fs_hz = 24000.0;
  const double tau = 20.0 * std::log10(std::exp(1.0)) / (60.0 / rt60);
  for (int k = 0; k < count; ++k) {
    Rng rng(500 + static_cast<std::uint64_t>(k));
    Audio a{fs_hz, {std::vector<double>(static_cast<std::size_t>(1.5 * fs_hz))}};
    for (std::size_t i = 0; i < a.channels[0].size(); ++i) {
      a.channels[0][i] = 0.25 * std::exp(-static_cast<double>(i) / fs_hz / tau) * rng.normal();
    }
    write_wav(dir / ("rir" + std::to_string(k) + ".wav"), a, SampleFormat::kFloat32);
  }
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("calibrate and inspect") {
  testing::TempDir tmp("cli_cal");
  write_decay_dir(tmp.path() / "rirs", 0.5, 3);
  const auto base = run("calibrate --rir-dir " + q(tmp.path() / "rirs") + " --dims 7,5,3 --plot " +
                        q(tmp.path() / "plots" / "edc"));
  REQUIRE(base.code == 0);
  const double rt = printed(base.output, "rt60");
  CHECK(rt >= 0.475);
  CHECK(rt <= 0.525);
  CHECK(printed(base.output, "absorption") > 0.0);
  CHECK(fs::exists(tmp.path() / "plots" / "edc.csv"));
  CHECK(fs::exists(tmp.path() / "plots" / "edc.svg"));
  const auto explicit_region =
      run("--quiet calibrate --rir-dir " + q(tmp.path() / "rirs") + " --dims 7,5,3 --region -5:-25");
  REQUIRE(explicit_region.code == 0);
  CHECK(printed(explicit_region.output, "rt60") == rt);

  fs::create_directories(tmp.path() / "empty");
  CHECK(run("calibrate --rir-dir " + q(tmp.path() / "empty") + " --dims 7,5,3").code == 2);
  CHECK(run("calibrate --rir-dir " + q(tmp.path() / "rirs") + " --dims 7,5").code == 2);
  fs::create_directories(tmp.path() / "click");
  write_wav(tmp.path() / "click" / "click.wav", Audio{24000.0, {std::vector<double>{0.5, 0.0, 0.0, 0.0}}},
            SampleFormat::kFloat32);
  CHECK(run("calibrate --rir-dir " + q(tmp.path() / "click") + " --dims 7,5,3").code == 3);
  CHECK(run("frobnicate").code == 2);

  const auto ins = run("inspect " + q(tmp.path() / "rirs" / "rir0.wav") + " --out " + q(tmp.path() / "one"));
  REQUIRE(ins.code == 0);
  CHECK(std::abs(printed(ins.output, "rt60") - 0.5) < 0.03);
  CHECK(fs::exists(tmp.path() / "one.svg"));
}

TEST_CASE("render-srirs") {
  testing::TempDir tmp("cli_render");
  const RoomSpec spec = testing::small_circular_room("cliroom", {6, 5, 3}, 15.0, 400);
  write_file(tmp.path() / "room.json", room_spec_to_json(spec));
  const auto one = run("-q render-srirs --spec " + q(tmp.path() / "room.json") + " --out " + q(tmp.path() / "b1") + " -j 1");
  const auto two = run("-q render-srirs --spec " + q(tmp.path() / "room.json") + " --out " + q(tmp.path() / "b2") + " -j 2");
  REQUIRE(one.code == 0);
  REQUIRE(two.code == 0);
  const std::regex sum("checksum ([0-9a-f]{64})");
  std::smatch m1, m2;
  REQUIRE(std::regex_search(one.output, m1, sum));
  REQUIRE(std::regex_search(two.output, m2, sum));
  CHECK(m1[1] == m2[1]);
  CHECK(load_bank(tmp.path() / "b1").size() == 24);

  RoomSpec outside = spec;
  outside.groups[0].radius = 10.0;
  write_file(tmp.path() / "outside.json", room_spec_to_json(outside));
  const auto bad = run("render-srirs --spec " + q(tmp.path() / "outside.json") + " --out " + q(tmp.path() / "b3"));
  CHECK(bad.code == 4);
  CHECK(bad.output.find("trajectory point") != std::string::npos);

  write_file(tmp.path() / "broken.json", "{\"name\": ");
  CHECK(run("render-srirs --spec " + q(tmp.path() / "broken.json") + " --out " + q(tmp.path() / "b4")).code == 2);
}

TEST_CASE("synthesize and evaluate") {
  testing::TempDir tmp("cli_synth");
  testing::write_synthetic_corpus(tmp.path() / "corpus", 13, 1, 61, 24000);
  fs::create_directories(tmp.path() / "specs");
  for (int r = 0; r < 9; ++r) {
    const auto spec = testing::small_circular_room("room" + std::to_string(r), {6.0 + 0.25 * r, 5, 3}, 30.0, 300);
    write_file(tmp.path() / "specs" / ("room" + std::to_string(r) + ".json"), room_spec_to_json(spec));
  }
  const std::string common = " --spec-dir " + q(tmp.path() / "specs") + " --corpus " + q(tmp.path() / "corpus") +
                             " --scale 0.01 --seed 17";
  const auto a = run("-q synthesize" + common + " --out " + q(tmp.path() / "a"));
  REQUIRE(a.code == 0);
  CHECK(a.output.find("wrote 12 mixtures") != std::string::npos);
  // The second run reuses the banks rendered by the first.
  const auto b = run("-q synthesize --spec-dir " + q(tmp.path() / "a" / "banks") + " --corpus " +
                     q(tmp.path() / "corpus") + " --scale 0.01 --seed 17 --out " + q(tmp.path() / "b"));
  REQUIRE(b.code == 0);
  const auto ma = read_dataset_manifest(tmp.path() / "a" / "manifest.json");
  const auto mb = read_dataset_manifest(tmp.path() / "b" / "manifest.json");
  REQUIRE(ma.mixtures.size() == 12);
  REQUIRE(mb.mixtures.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(ma.mixtures[i].wav_sha256 == mb.mixtures[i].wav_sha256);
    CHECK(ma.mixtures[i].csv_sha256 == mb.mixtures[i].csv_sha256);
  }

  fs::remove(tmp.path() / "specs" / "room8.json");
  CHECK(run("synthesize" + common + " --out " + q(tmp.path() / "c")).code == 2);

  // Scoring the references against themselves is perfect.
  const fs::path ref_csv = tmp.path() / "a" / (ma.mixtures[0].name + ".csv");
  const auto self = run("evaluate --ref " + q(ref_csv) + " --pred " + q(ref_csv));
  REQUIRE(self.code == 0);
  CHECK(self.output.find("ER 0.00  F 100.0%  LE 0.0°  LR 100.0%") != std::string::npos);
  const auto pooled = run("evaluate --ref " + q(tmp.path() / "a" / "val") + " --pred " + q(tmp.path() / "a" / "val"));
  REQUIRE(pooled.code == 0);
  CHECK(pooled.output.find("ER 0.00  F 100.0%") != std::string::npos);

  // A 30 degree offset: LE and LR do not depend on the threshold.
  FrameAnnotations shifted = read_annotations(ref_csv);
  for (auto& row : shifted) row.azimuth = round_azimuth(row.azimuth + 30.0);
  write_file(tmp.path() / "shifted.csv", annotations_to_csv(shifted));
  const auto t20 = run("evaluate --ref " + q(ref_csv) + " --pred " + q(tmp.path() / "shifted.csv"));
  const auto t40 = run("evaluate --ref " + q(ref_csv) + " --pred " + q(tmp.path() / "shifted.csv") +
                       " --threshold 40 --csv " + q(tmp.path() / "scores.csv"));
  REQUIRE(t20.code == 0);
  REQUIRE(t40.code == 0);
  CHECK(printed(t20.output, "LE") == printed(t40.output, "LE"));
  CHECK(printed(t20.output, "LR") == printed(t40.output, "LR"));
  CHECK(printed(t20.output, "F") < printed(t40.output, "F"));
  CHECK(fs::exists(tmp.path() / "scores.csv"));

  write_file(tmp.path() / "malformed.csv", "0,1,0,10,0\n1,1,0,10\n");
  const auto malformed = run("evaluate --ref " + q(ref_csv) + " --pred " + q(tmp.path() / "malformed.csv"));
  CHECK(malformed.code == 2);
  CHECK(malformed.output.find("line 2") != std::string::npos);

  write_file(tmp.path() / "empty.csv", "");
  CHECK(run("evaluate --ref " + q(tmp.path() / "empty.csv") + " --pred " + q(ref_csv)).code == 3);
}

}  // TEST_SUITE
