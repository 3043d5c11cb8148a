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

#ifndef SRIRFORGE_MIXER_HPP_
#define SRIRFORGE_MIXER_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "srirforge/annotations.hpp"
#include "srirforge/bank.hpp"
#include "srirforge/ism.hpp"
#include "srirforge/wav.hpp"

namespace srirforge {

struct EventClip {
  int class_id = 0;
  std::vector<double> samples;
  double sample_rate = kDefaultSampleRate;
  std::string source_id;

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

struct Corpus {
  std::vector<EventClip> clips;
  int skipped_unmapped = 0;
  int skipped_silent = 0;
  std::vector<std::string> warnings;
};

// Label name (corpus subdirectory) -> class id in [0, 12].
using LabelMap = std::map<std::string, int>;

// Sorted subdirectory names mapped to 0, 1, ... (at most 13).
LabelMap default_label_map(const std::filesystem::path& dir);
LabelMap read_label_map(const std::filesystem::path& path);

// Downmix, resample to `sample_rate`, peak-normalize to -3 dBFS and trim
// leading/trailing samples below -60 dBFS. Returns an empty clip for silence.
EventClip prepare_clip(const Audio& audio, int class_id, std::string source_id,
                       double sample_rate = kDefaultSampleRate);

// Reads <dir>/<label>/*.wav. Unmapped labels and silent files are skipped and
// counted; an unreadable file throws LoadError naming it.
Corpus ingest_corpus(const std::filesystem::path& dir, const LabelMap& labels,
                     double sample_rate = kDefaultSampleRate);

enum class Fold { kTrain, kVal };
std::string_view to_string(Fold f);

struct StaticMotion {
  std::size_t entry = 0;
};

struct DynamicMotion {
  std::size_t trace = 0;
  int start_index = 0;
  double speed_deg_s = 10.0;
  int direction = 1;
};

struct ScheduledEvent {
  std::size_t clip = 0;  // index into the corpus
  int class_id = 0;
  double onset = 0.0;     // seconds, on the frame grid
  std::size_t length = 0; // samples actually used from the clip
  std::variant<StaticMotion, DynamicMotion> motion;
  int source = 0;         // track id in [0, max_polyphony)
  double gain_db = 0.0;

  bool is_static() const { return std::holds_alternative<StaticMotion>(motion); }
};

struct EventTimeline {
  std::string room;
  Fold fold = Fold::kTrain;
  std::vector<ScheduledEvent> events;
  std::uint64_t seed = 0;
};

struct MixConfig {
  double duration_s = 60.0;
  double min_activity_s = 40.0;
  int max_polyphony = 3;
  double static_probability = 0.5;
  std::vector<double> speeds_deg_s = {10.0, 20.0, 40.0};
  double gain_min_db = -6.0;
  double gain_max_db = 0.0;
  double max_event_s = 20.0;
  int min_events = 1;
  int max_events = 0;  // 0: unlimited
  int max_attempts = 5000;
  // Uniform over classes, or proportional to clip counts per class.
  bool uniform_classes = true;
  bool add_noise = false;
  double noise_dbfs = -60.0;
  double peak_dbfs = -1.0;
  double sample_rate = kDefaultSampleRate;

  int frames() const;
};

EventTimeline schedule_events(const Corpus& corpus, const SrirBank& bank, const MixConfig& config,
                              std::uint64_t seed, Fold fold = Fold::kTrain);

// Inclusive frame range an event is annotated on: the frame holding its
// onset through the frame holding its offset, clipped to the mixture.
std::pair<int, int> event_frames(const ScheduledEvent& ev, double sample_rate, int total_frames);

Audio spatialize_static(std::span<const double> clip, double clip_rate, const Srir& srir);

// Amplitude fade of segment k at sample n for segment period `period`
// samples. Squared fades of neighbouring segments sum to one.
double segment_fade(double n, int k, double period);

// Number of SRIRs a moving render of `samples` needs at `period` samples per
// SRIR.
std::size_t moving_srirs_needed(std::size_t samples, double period);

// Segment-wise convolution with 50%-overlapping raised-cosine crossfades:
// segment k is centred at k * period and weighted by segment_fade^2.
Audio spatialize_moving(std::span<const double> clip, double clip_rate, std::span<const Srir> srirs,
                        double step_deg, double speed_deg_s);

struct MixtureResult {
  Audio audio;
  FrameAnnotations annotations;
  double global_gain = 1.0;
};

// SRIR index sequence a dynamic event walks through.
std::vector<std::size_t> dynamic_entry_sequence(const SrirBank& bank, const DynamicMotion& motion,
                                                std::size_t count);

MixtureResult render_mixture(const EventTimeline& timeline, const SrirBank& bank, const Corpus& corpus,
                             const MixConfig& config);

struct DatasetConfig {
  double scale = 1.0;
  int train_mixtures = 900;  // at scale 1
  int val_mixtures = 300;
  int train_rooms = 6;
  int val_rooms = 3;
  int jobs = 1;
  MixConfig mix;

  int train_count() const;
  int val_count() const;
};

struct MixtureRecord {
  std::string name;
  Fold fold = Fold::kTrain;
  std::string room;
  std::uint64_t seed = 0;
  double global_gain = 1.0;
  std::string wav_sha256;
  std::string csv_sha256;
  std::size_t events = 0;
  std::vector<double> event_gains_db;
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::vector<std::string> train_rooms;
  std::vector<std::string> val_rooms;
  std::vector<MixtureRecord> mixtures;
};

// Renders one mixture from its seed; the encoded WAV and CSV are what
// generate_dataset writes.
struct EncodedMixture {
  MixtureResult result;
  EventTimeline timeline;
  std::string wav;
  std::string csv;
};
EncodedMixture synthesize_mixture(const SrirBank& bank, const Corpus& corpus, const MixConfig& config,
                                  std::uint64_t seed, Fold fold);

// Assigns rooms to folds (sorted by name: first train_rooms to train, next
// val_rooms to val) and writes <out>/<fold>/<name>.{wav,csv} plus
// <out>/manifest.json.
DatasetManifest generate_dataset(std::span<const SrirBank> banks, const Corpus& corpus,
                                 const DatasetConfig& config, std::uint64_t seed,
                                 const std::filesystem::path& out);

std::string dataset_manifest_json(const DatasetManifest& manifest, const DatasetConfig& config);
DatasetManifest read_dataset_manifest(const std::filesystem::path& path);

}  // namespace srirforge

#endif  // SRIRFORGE_MIXER_HPP_
