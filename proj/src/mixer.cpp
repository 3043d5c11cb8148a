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

#include "srirforge/mixer.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "srirforge/dsp.hpp"
#include "srirforge/error.hpp"
#include "srirforge/util.hpp"

namespace srirforge {
namespace {

using nlohmann::json;

constexpr double kClipPeakDbfs = -3.0;
constexpr double kTrimDbfs = -60.0;
constexpr int kPlacementTries = 20;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ull;

int frame_hop(double sample_rate) { return static_cast<int>(std::lround(kFrameSeconds * sample_rate)); }

std::size_t onset_samples(const ScheduledEvent& ev, double sample_rate) {
  return static_cast<std::size_t>(std::lround(ev.onset * sample_rate));
}

void check_bank_audio(const SrirBank& bank, double sample_rate) {
  if (bank.size() == 0) throw InvalidArgument("SRIR bank '" + bank.spec.name + "' is empty");
  if (bank.spec.sample_rate != sample_rate) {
    throw InvalidArgument("bank '" + bank.spec.name + "' sample rate differs from the mixture rate");
  }
}

}  // namespace

std::string_view to_string(Fold f) { return f == Fold::kTrain ? "train" : "val"; }

int MixConfig::frames() const { return static_cast<int>(std::lround(duration_s / kFrameSeconds)); }

int DatasetConfig::train_count() const { return static_cast<int>(std::lround(train_mixtures * scale)); }
int DatasetConfig::val_count() const { return static_cast<int>(std::lround(val_mixtures * scale)); }

LabelMap default_label_map(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.is_directory()) names.push_back(e.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  if (names.size() > static_cast<std::size_t>(kNumClasses)) {
    throw ConfigError("corpus has " + std::to_string(names.size()) + " label directories; at most " +
                      std::to_string(kNumClasses) + " classes are supported without a label map");
  }
  LabelMap map;
  for (std::size_t i = 0; i < names.size(); ++i) map[names[i]] = static_cast<int>(i);
  return map;
}

LabelMap read_label_map(const std::filesystem::path& path) {
  LabelMap map;
  try {
    const json j = json::parse(read_file(path));
    for (const auto& [name, id] : j.items()) map[name] = id.get<int>();
  } catch (const json::exception& e) {
    throw ConfigError("invalid label map " + path.string() + ": " + e.what());
  }
  for (const auto& [name, id] : map) {
    if (id < 0 || id >= kNumClasses) throw ConfigError("label '" + name + "' maps outside [0, 12]");
  }
  return map;
}

EventClip prepare_clip(const Audio& audio, int class_id, std::string source_id, double sample_rate) {
  EventClip clip;
  clip.class_id = class_id;
  clip.sample_rate = sample_rate;
  clip.source_id = std::move(source_id);
  if (audio.channel_count() == 0 || audio.frames() == 0) return clip;

  std::vector<double> mono(audio.frames(), 0.0);
  const double inv = 1.0 / static_cast<double>(audio.channel_count());
  for (const auto& ch : audio.channels) {
    for (std::size_t i = 0; i < mono.size(); ++i) mono[i] += ch[i] * inv;
  }
  mono = resample(mono, audio.sample_rate, sample_rate);

  const double peak = peak_abs(mono);
  if (!(peak > 0.0)) return clip;
  const double gain = db_to_gain(kClipPeakDbfs) / peak;
  for (auto& v : mono) v *= gain;

  const double floor = db_to_gain(kTrimDbfs);
  std::size_t first = 0;
  while (first < mono.size() && std::abs(mono[first]) < floor) ++first;
  std::size_t last = mono.size();
  while (last > first && std::abs(mono[last - 1]) < floor) --last;
  clip.samples.assign(mono.begin() + static_cast<std::ptrdiff_t>(first),
                      mono.begin() + static_cast<std::ptrdiff_t>(last));
  return clip;
}

Corpus ingest_corpus(const std::filesystem::path& dir, const LabelMap& labels, double sample_rate) {
  Corpus corpus;
  if (!std::filesystem::is_directory(dir)) throw LoadError("corpus directory " + dir.string() + " not found");

  std::vector<std::filesystem::path> subdirs;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_directory()) {
      subdirs.push_back(e.path());
    } else if (e.path().extension() == ".wav") {
      corpus.warnings.push_back("unlabelled file " + e.path().string() + " ignored");
      ++corpus.skipped_unmapped;
    }
  }
  std::sort(subdirs.begin(), subdirs.end());

  for (const auto& sub : subdirs) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(sub)) {
      if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    const std::string label = sub.filename().string();
    const auto it = labels.find(label);
    if (it == labels.end()) {
      corpus.skipped_unmapped += static_cast<int>(files.size());
      corpus.warnings.push_back("label '" + label + "' is not in the label map; " +
                                std::to_string(files.size()) + " files skipped");
      continue;
    }
    for (const auto& f : files) {
      EventClip clip = prepare_clip(read_wav(f), it->second, label + "/" + f.filename().string(), sample_rate);
      if (clip.samples.empty()) {
        ++corpus.skipped_silent;
        corpus.warnings.push_back("silent file " + f.string() + " skipped");
        continue;
      }
      corpus.clips.push_back(std::move(clip));
    }
  }
  if (corpus.clips.empty()) corpus.warnings.push_back("corpus " + dir.string() + " contains no usable clips");
  return corpus;
}

std::pair<int, int> event_frames(const ScheduledEvent& ev, double sample_rate, int total_frames) {
  const auto hop = static_cast<std::size_t>(frame_hop(sample_rate));
  const std::size_t start = onset_samples(ev, sample_rate);
  const int first = static_cast<int>(start / hop);
  const int last = static_cast<int>((start + ev.length) / hop);
  return {std::min(first, total_frames - 1), std::min(last, total_frames - 1)};
}

std::size_t moving_srirs_needed(std::size_t samples, double period) {
  if (samples <= 1) return 1;
  return static_cast<std::size_t>(std::ceil(static_cast<double>(samples - 1) / period - 1e-9)) + 1;
}

std::vector<std::size_t> dynamic_entry_sequence(const SrirBank& bank, const DynamicMotion& motion,
                                                std::size_t count) {
  const auto& trace = bank.traces.at(motion.trace);
  const auto n = static_cast<long>(trace.count);
  std::vector<std::size_t> seq;
  seq.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    long idx = motion.start_index + motion.direction * static_cast<long>(k);
    if (trace.circular) {
      idx = ((idx % n) + n) % n;
    } else if (idx < 0 || idx >= n) {
      throw InvalidArgument("dynamic event runs off the end of a linear trace");
    }
    seq.push_back(trace.first + static_cast<std::size_t>(idx));
  }
  return seq;
}

EventTimeline schedule_events(const Corpus& corpus, const SrirBank& bank, const MixConfig& config,
                              std::uint64_t seed, Fold fold) {
  if (corpus.clips.empty()) throw InvalidArgument("cannot schedule events from an empty corpus");
  if (bank.size() == 0) throw InvalidArgument("cannot schedule events on an empty SRIR bank");
  if (config.max_polyphony < 1) throw ConfigError("max_polyphony must be >= 1");
  if (config.speeds_deg_s.empty()) throw ConfigError("at least one angular speed is required");
  if (config.min_activity_s > config.duration_s) throw ConfigError("required activity exceeds the clip duration");

  const int n_frames = config.frames();
  const int hop = frame_hop(config.sample_rate);
  const std::size_t total = static_cast<std::size_t>(n_frames) * static_cast<std::size_t>(hop);
  const auto max_len = static_cast<std::size_t>(
      std::min(std::floor(config.max_event_s * config.sample_rate), static_cast<double>(total - hop)));

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < corpus.clips.size(); ++i) {
    if (!corpus.clips[i].samples.empty()) by_class[corpus.clips[i].class_id].push_back(i);
  }
  if (by_class.empty()) throw InvalidArgument("corpus has no non-empty clips");
  std::vector<int> classes;
  for (const auto& [c, _] : by_class) classes.push_back(c);
  std::vector<std::size_t> all_clips;
  for (const auto& [_, v] : by_class) all_clips.insert(all_clips.end(), v.begin(), v.end());
  std::sort(all_clips.begin(), all_clips.end());

  std::vector<std::size_t> moving_traces;
  for (std::size_t t = 0; t < bank.traces.size(); ++t) {
    if (bank.traces[t].count >= 2 && bank.traces[t].step_deg > 0.0) moving_traces.push_back(t);
  }

  EventTimeline tl;
  tl.room = bank.spec.name;
  tl.fold = fold;
  tl.seed = seed;
  Rng rng(seed);

  std::vector<std::vector<char>> busy(static_cast<std::size_t>(config.max_polyphony),
                                      std::vector<char>(static_cast<std::size_t>(n_frames), 0));
  std::vector<int> active(static_cast<std::size_t>(n_frames), 0);
  int active_frames = 0;

  auto done = [&] {
    const bool activity_ok = active_frames * kFrameSeconds >= config.min_activity_s - 1e-9;
    return activity_ok && static_cast<int>(tl.events.size()) >= config.min_events;
  };

  int attempts = 0;
  while (!done()) {
    if (config.max_events > 0 && static_cast<int>(tl.events.size()) >= config.max_events) {
      throw SchedulingFailure("reached " + std::to_string(config.max_events) + " events with only " +
                              std::to_string(active_frames * kFrameSeconds) + " s of activity");
    }
    if (++attempts > config.max_attempts) {
      throw SchedulingFailure("gave up after " + std::to_string(config.max_attempts) + " attempts: " +
                              std::to_string(tl.events.size()) + " events placed, " +
                              std::to_string(active_frames * kFrameSeconds) + " s of " +
                              std::to_string(config.min_activity_s) + " s activity reached");
    }

    std::size_t clip_index;
    if (config.uniform_classes) {
      const auto& pool = by_class[classes[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(classes.size()) - 1))]];
      clip_index = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
    } else {
      clip_index = all_clips[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(all_clips.size()) - 1))];
    }
    const EventClip& clip = corpus.clips[clip_index];
    if (clip.sample_rate != config.sample_rate) throw InvalidArgument("clip sample rate differs from the mixture rate");

    ScheduledEvent ev;
    ev.clip = clip_index;
    ev.class_id = clip.class_id;
    ev.length = std::min(clip.samples.size(), max_len);
    ev.gain_db = rng.uniform(config.gain_min_db, config.gain_max_db);

    const bool is_static = moving_traces.empty() || rng.bernoulli(config.static_probability);
    if (is_static) {
      ev.motion = StaticMotion{static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(bank.size()) - 1))};
    } else {
      DynamicMotion m;
      m.speed_deg_s = config.speeds_deg_s[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(config.speeds_deg_s.size()) - 1))];
      m.direction = rng.bernoulli(0.5) ? 1 : -1;
      m.trace = moving_traces[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(moving_traces.size()) - 1))];
      const auto& trace = bank.traces[m.trace];
      const double period = trace.step_deg / m.speed_deg_s * config.sample_rate;
      if (!trace.circular) {
        // A linear trace bounds how long the source can keep moving.
        const auto fit = static_cast<std::size_t>(std::floor((trace.count - 1) * period)) + 1;
        ev.length = std::min(ev.length, fit);
      }
      const auto needed = static_cast<std::int64_t>(moving_srirs_needed(ev.length, period));
      const auto count = static_cast<std::int64_t>(trace.count);
      if (trace.circular) {
        m.start_index = static_cast<int>(rng.uniform_int(0, count - 1));
      } else if (m.direction > 0) {
        m.start_index = static_cast<int>(rng.uniform_int(0, count - needed));
      } else {
        m.start_index = static_cast<int>(rng.uniform_int(needed - 1, count - 1));
      }
      ev.motion = m;
    }
    if (ev.length == 0) continue;

    const int span = static_cast<int>(ev.length / static_cast<std::size_t>(hop));
    const int f_max = static_cast<int>((total - 1 - ev.length) / static_cast<std::size_t>(hop));
    for (int tries = 0; tries < kPlacementTries; ++tries) {
      int f;
      std::vector<int> uncovered;
      if (rng.bernoulli(0.5)) {
        for (int i = 0; i < n_frames; ++i) {
          if (active[static_cast<std::size_t>(i)] == 0) uncovered.push_back(i);
        }
      }
      if (uncovered.empty()) {
        f = static_cast<int>(rng.uniform_int(0, f_max));
      } else {
        const int u = uncovered[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(uncovered.size()) - 1))];
        const int lo = std::max(0, u - span);
        const int hi = std::min(u, f_max);
        if (lo > hi) continue;
        f = static_cast<int>(rng.uniform_int(lo, hi));
      }
      int track = -1;
      for (int t = 0; t < config.max_polyphony && track < 0; ++t) {
        const auto& row = busy[static_cast<std::size_t>(t)];
        if (std::all_of(row.begin() + f, row.begin() + f + span + 1, [](char b) { return b == 0; })) track = t;
      }
      if (track < 0) continue;

      ev.onset = f * kFrameSeconds;
      ev.source = track;
      for (int i = f; i <= f + span; ++i) {
        busy[static_cast<std::size_t>(track)][static_cast<std::size_t>(i)] = 1;
        if (active[static_cast<std::size_t>(i)]++ == 0) ++active_frames;
      }
      tl.events.push_back(ev);
      break;
    }
  }
  std::stable_sort(tl.events.begin(), tl.events.end(),
                   [](const ScheduledEvent& a, const ScheduledEvent& b) { return a.onset < b.onset; });
  return tl;
}

Audio spatialize_static(std::span<const double> clip, double clip_rate, const Srir& srir) {
  if (srir.channels.empty()) throw InvalidArgument("SRIR has no channels");
  if (clip_rate != srir.sample_rate()) throw InvalidArgument("clip and SRIR sample rates differ");
  if (clip.empty()) throw InvalidArgument("cannot spatialize an empty clip");
  std::vector<std::span<const double>> filters;
  for (const auto& ch : srir.channels) filters.emplace_back(ch.samples);
  return {clip_rate, convolve_many(clip, filters)};
}

double segment_fade(double n, int k, double period) {
  const double x = (n - k * period) / period;
  if (x <= -1.0 || x >= 1.0) return 0.0;
  return std::cos(0.5 * std::numbers::pi * x);
}

Audio spatialize_moving(std::span<const double> clip, double clip_rate, std::span<const Srir> srirs,
                        double step_deg, double speed_deg_s) {
  if (clip.empty()) throw InvalidArgument("cannot spatialize an empty clip");
  if (!(step_deg > 0.0) || !(speed_deg_s > 0.0)) throw InvalidArgument("step and speed must be > 0");
  if (srirs.empty()) throw InvalidArgument("empty SRIR sequence");
  const double period = step_deg / speed_deg_s * clip_rate;
  const std::size_t needed = moving_srirs_needed(clip.size(), period);
  if (srirs.size() < needed) {
    throw InvalidArgument("SRIR sequence too short: need " + std::to_string(needed) + " SRIRs spanning " +
                          std::to_string((needed - 1) * step_deg) + " degrees, got " +
                          std::to_string(srirs.size()));
  }
  const std::size_t channels = srirs.front().channels.size();
  std::size_t srir_len = 0;
  for (std::size_t k = 0; k < needed; ++k) {
    if (srirs[k].channels.size() != channels) throw InvalidArgument("SRIRs differ in channel count");
    if (srirs[k].sample_rate() != clip_rate) throw InvalidArgument("clip and SRIR sample rates differ");
    srir_len = std::max(srir_len, srirs[k].length());
  }

  const std::size_t n = clip.size();
  Audio out{clip_rate, std::vector<std::vector<double>>(channels, std::vector<double>(n + srir_len - 1, 0.0))};
  std::vector<double> segment;
  for (std::size_t k = 0; k < needed; ++k) {
    const double centre = static_cast<double>(k) * period;
    const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil(centre - period)));
    const auto hi = static_cast<std::size_t>(std::min(static_cast<double>(n - 1), std::floor(centre + period)));
    if (lo > hi) continue;
    segment.assign(hi - lo + 1, 0.0);
    bool any = false;
    for (std::size_t i = lo; i <= hi; ++i) {
      const double f = segment_fade(static_cast<double>(i), static_cast<int>(k), period);
      segment[i - lo] = clip[i] * f * f;
      any = any || segment[i - lo] != 0.0;
    }
    if (!any) continue;
    std::vector<std::span<const double>> filters;
    for (const auto& ch : srirs[k].channels) filters.emplace_back(ch.samples);
    const auto parts = convolve_many(segment, filters);
    for (std::size_t c = 0; c < channels; ++c) {
      auto& dst = out.channels[c];
      const auto& src = parts[c];
      const std::size_t len = std::min(src.size(), dst.size() - lo);
      for (std::size_t i = 0; i < len; ++i) dst[lo + i] += src[i];
    }
  }
  return out;
}

MixtureResult render_mixture(const EventTimeline& timeline, const SrirBank& bank, const Corpus& corpus,
                             const MixConfig& config) {
  const int n_frames = config.frames();
  const int hop = frame_hop(config.sample_rate);
  const std::size_t total = static_cast<std::size_t>(n_frames) * static_cast<std::size_t>(hop);
  if (!timeline.events.empty()) check_bank_audio(bank, config.sample_rate);

  MixtureResult result;
  result.audio.sample_rate = config.sample_rate;
  result.audio.channels.assign(4, std::vector<double>(total, 0.0));

  for (std::size_t e = 0; e < timeline.events.size(); ++e) {
    const auto& ev = timeline.events[e];
    const EventClip& clip = corpus.clips.at(ev.clip);
    if (ev.length > clip.samples.size()) throw InvalidArgument("event longer than its clip");
    std::vector<double> dry(clip.samples.begin(), clip.samples.begin() + static_cast<std::ptrdiff_t>(ev.length));
    const double gain = db_to_gain(ev.gain_db);
    for (auto& v : dry) v *= gain;

    Audio wet;
    if (const auto* s = std::get_if<StaticMotion>(&ev.motion)) {
      wet = spatialize_static(dry, clip.sample_rate, bank.srir(s->entry));
    } else {
      const auto& m = std::get<DynamicMotion>(ev.motion);
      const auto& trace = bank.traces.at(m.trace);
      const double period = trace.step_deg / m.speed_deg_s * config.sample_rate;
      std::vector<Srir> seq;
      for (std::size_t idx : dynamic_entry_sequence(bank, m, moving_srirs_needed(dry.size(), period))) {
        seq.push_back(bank.srir(idx));
      }
      wet = spatialize_moving(dry, clip.sample_rate, seq, trace.step_deg, m.speed_deg_s);
    }
    if (wet.channel_count() != 4) throw InvalidArgument("mixtures need 4-channel SRIRs");

    const std::size_t start = onset_samples(ev, config.sample_rate);
    for (std::size_t c = 0; c < 4; ++c) {
      auto& dst = result.audio.channels[c];
      const auto& src = wet.channels[c];
      for (std::size_t i = 0; i < src.size() && start + i < total; ++i) {
        if (!std::isfinite(src[i])) throw InvalidArgument("event " + std::to_string(e) + " produced non-finite audio");
        dst[start + i] += src[i];
      }
    }
  }

  if (config.add_noise) {
    Rng noise(derive_seed(timeline.seed, kNoiseStream));
    const double level = db_to_gain(config.noise_dbfs);
    for (auto& ch : result.audio.channels) {
      for (auto& v : ch) v += level * noise.normal();
    }
  }

  double peak = 0.0;
  for (const auto& ch : result.audio.channels) peak = std::max(peak, peak_abs(ch));
  if (peak > 0.0) {
    result.global_gain = db_to_gain(config.peak_dbfs) / peak;
    for (auto& ch : result.audio.channels) {
      for (auto& v : ch) v *= result.global_gain;
    }
  }

  for (const auto& ev : timeline.events) {
    const auto [first, last] = event_frames(ev, config.sample_rate, n_frames);
    const double onset = static_cast<double>(onset_samples(ev, config.sample_rate)) / config.sample_rate;
    const double offset = onset + static_cast<double>(ev.length) / config.sample_rate;
    for (int f = first; f <= last; ++f) {
      const double t = std::clamp(f * kFrameSeconds, onset, offset) - onset;
      Vec3 doa;
      if (const auto* s = std::get_if<StaticMotion>(&ev.motion)) {
        doa = bank.entries.at(s->entry).doa;
      } else {
        const auto& m = std::get<DynamicMotion>(ev.motion);
        const auto& trace = bank.traces.at(m.trace);
        const double pos = t * m.speed_deg_s / trace.step_deg;
        const auto whole = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(whole);
        DynamicMotion clamped = m;
        const auto seq = dynamic_entry_sequence(bank, clamped, whole + 1);
        const Vec3 d0 = bank.entries[seq.back()].doa;
        Vec3 d1 = d0;
        if (frac > 0.0) {
          try {
            d1 = bank.entries[dynamic_entry_sequence(bank, clamped, whole + 2).back()].doa;
          } catch (const InvalidArgument&) {
            d1 = d0;  // end of a linear trace
          }
        }
        doa = normalize((1.0 - frac) * d0 + frac * d1);
      }
      const Direction dir = cart_to_sph(doa);
      result.annotations.push_back(
          {f, ev.class_id, ev.source, round_azimuth(dir.azimuth), round_elevation(dir.elevation)});
    }
  }
  std::stable_sort(result.annotations.begin(), result.annotations.end(),
                   [](const AnnotationRow& a, const AnnotationRow& b) {
                     return a.frame != b.frame ? a.frame < b.frame : a.source < b.source;
                   });
  return result;
}

EncodedMixture synthesize_mixture(const SrirBank& bank, const Corpus& corpus, const MixConfig& config,
                                  std::uint64_t seed, Fold fold) {
  EncodedMixture m;
  m.timeline = schedule_events(corpus, bank, config, seed, fold);
  m.result = render_mixture(m.timeline, bank, corpus, config);
  m.wav = encode_wav(m.result.audio, SampleFormat::kPcm16);
  m.csv = annotations_to_csv(m.result.annotations);
  return m;
}

DatasetManifest generate_dataset(std::span<const SrirBank> banks, const Corpus& corpus,
                                 const DatasetConfig& config, std::uint64_t seed,
                                 const std::filesystem::path& out) {
  if (config.train_rooms < 1 || config.val_rooms < 1) throw ConfigError("each fold needs at least one room");
  const auto needed_rooms = static_cast<std::size_t>(config.train_rooms + config.val_rooms);
  if (banks.size() < needed_rooms) {
    throw ConfigError("need " + std::to_string(needed_rooms) + " rooms for disjoint folds (" +
                      std::to_string(config.train_rooms) + " train + " + std::to_string(config.val_rooms) +
                      " val), got " + std::to_string(banks.size()));
  }
  std::vector<const SrirBank*> sorted;
  for (const auto& b : banks) sorted.push_back(&b);
  std::sort(sorted.begin(), sorted.end(),
            [](const SrirBank* a, const SrirBank* b) { return a->spec.name < b->spec.name; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->spec.name == sorted[i - 1]->spec.name) {
      throw ConfigError("duplicate room name '" + sorted[i]->spec.name + "'");
    }
  }
  for (const auto* b : sorted) {
    check_bank_audio(*b, config.mix.sample_rate);
    if (!b->has_audio()) throw InvalidArgument("bank '" + b->spec.name + "' has no rendered SRIRs");
  }

  DatasetManifest manifest;
  manifest.seed = seed;
  manifest.scale = config.scale;
  std::vector<const SrirBank*> train(sorted.begin(), sorted.begin() + config.train_rooms);
  std::vector<const SrirBank*> val(sorted.begin() + config.train_rooms, sorted.begin() + static_cast<std::ptrdiff_t>(needed_rooms));
  for (const auto* b : train) manifest.train_rooms.push_back(b->spec.name);
  for (const auto* b : val) manifest.val_rooms.push_back(b->spec.name);

  const int n_train = config.train_count();
  const int n_val = config.val_count();
  struct Job {
    Fold fold;
    const SrirBank* bank;
    int index_in_fold;
  };
  std::vector<Job> jobs;
  for (int i = 0; i < n_train; ++i) jobs.push_back({Fold::kTrain, train[static_cast<std::size_t>(i) % train.size()], i});
  for (int i = 0; i < n_val; ++i) jobs.push_back({Fold::kVal, val[static_cast<std::size_t>(i) % val.size()], i});

  std::filesystem::create_directories(out / "train");
  std::filesystem::create_directories(out / "val");
  manifest.mixtures.resize(jobs.size());
  parallel_for(jobs.size(), config.jobs, [&](std::size_t i) {
    const Job& job = jobs[i];
    MixtureRecord rec;
    char name[32];
    std::snprintf(name, sizeof(name), "mix%04d_", job.index_in_fold + 1);
    rec.name = std::string(to_string(job.fold)) + "/" + name + job.bank->spec.name;
    rec.fold = job.fold;
    rec.room = job.bank->spec.name;
    rec.seed = derive_seed(seed, i);
    EncodedMixture m = synthesize_mixture(*job.bank, corpus, config.mix, rec.seed, job.fold);
    rec.global_gain = m.result.global_gain;
    rec.wav_sha256 = sha256_hex(m.wav);
    rec.csv_sha256 = sha256_hex(m.csv);
    rec.events = m.timeline.events.size();
    for (const auto& ev : m.timeline.events) rec.event_gains_db.push_back(ev.gain_db);
    write_file(out / (rec.name + ".wav"), m.wav);
    write_file(out / (rec.name + ".csv"), m.csv);
    manifest.mixtures[i] = std::move(rec);
  });
  write_file(out / "manifest.json", dataset_manifest_json(manifest, config));
  return manifest;
}

std::string dataset_manifest_json(const DatasetManifest& manifest, const DatasetConfig& config) {
  json j;
  j["seed"] = manifest.seed;
  j["scale"] = manifest.scale;
  j["folds"] = {{"train", manifest.train_rooms}, {"val", manifest.val_rooms}};
  const auto& mc = config.mix;
  j["config"] = {{"duration_s", mc.duration_s},
                 {"min_activity_s", mc.min_activity_s},
                 {"max_polyphony", mc.max_polyphony},
                 {"static_probability", mc.static_probability},
                 {"speeds_deg_s", mc.speeds_deg_s},
                 {"gain_db", {mc.gain_min_db, mc.gain_max_db}},
                 {"max_event_s", mc.max_event_s},
                 {"uniform_classes", mc.uniform_classes},
                 {"add_noise", mc.add_noise},
                 {"noise_dbfs", mc.noise_dbfs},
                 {"peak_dbfs", mc.peak_dbfs},
                 {"sample_rate", mc.sample_rate}};
  json mixes = json::array();
  for (const auto& m : manifest.mixtures) {
    mixes.push_back({{"name", m.name},
                     {"fold", to_string(m.fold)},
                     {"room", m.room},
                     {"seed", m.seed},
                     {"global_gain", m.global_gain},
                     {"events", m.events},
                     {"event_gains_db", m.event_gains_db},
                     {"wav_sha256", m.wav_sha256},
                     {"csv_sha256", m.csv_sha256}});
  }
  j["mixtures"] = std::move(mixes);
  return j.dump(1);
}

DatasetManifest read_dataset_manifest(const std::filesystem::path& path) {
  DatasetManifest manifest;
  try {
    const json j = json::parse(read_file(path));
    manifest.seed = j.at("seed").get<std::uint64_t>();
    manifest.scale = j.at("scale").get<double>();
    manifest.train_rooms = j.at("folds").at("train").get<std::vector<std::string>>();
    manifest.val_rooms = j.at("folds").at("val").get<std::vector<std::string>>();
    for (const auto& m : j.at("mixtures")) {
      MixtureRecord rec;
      rec.name = m.at("name").get<std::string>();
      rec.fold = m.at("fold").get<std::string>() == "train" ? Fold::kTrain : Fold::kVal;
      rec.room = m.at("room").get<std::string>();
      rec.seed = m.at("seed").get<std::uint64_t>();
      rec.global_gain = m.at("global_gain").get<double>();
      rec.events = m.at("events").get<std::size_t>();
      rec.event_gains_db = m.at("event_gains_db").get<std::vector<double>>();
      rec.wav_sha256 = m.at("wav_sha256").get<std::string>();
      rec.csv_sha256 = m.at("csv_sha256").get<std::string>();
      manifest.mixtures.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw LoadError("corrupt dataset manifest " + path.string() + ": " + e.what());
  }
  return manifest;
}

}  // namespace srirforge
