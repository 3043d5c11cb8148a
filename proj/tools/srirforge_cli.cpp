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

// srirforge: calibrate virtual rooms, render SRIR banks, synthesize SELD
// mixtures and score predictions.
//
// Exit codes: 0 success, 2 input/config error, 3 insufficient data,
// 4 infeasible physics, 5 scheduling failure, 1 anything else.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "srirforge/annotations.hpp"
#include "srirforge/bank.hpp"
#include "srirforge/calibration.hpp"
#include "srirforge/error.hpp"
#include "srirforge/metrics.hpp"
#include "srirforge/mixer.hpp"
#include "srirforge/plot.hpp"
#include "srirforge/wav.hpp"

namespace fs = std::filesystem;
using namespace srirforge;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kInput = 2, kInsufficient = 3, kInfeasible = 4, kScheduling = 5 };

struct GlobalConfig {
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void log(const GlobalConfig& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << "\n";
}

Vec3 parse_dims(const std::string& text) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find_first_of(",x", pos);
    const std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InvalidArgument("bad dimension '" + part + "' in --dims " + text);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (v.size() != 3) throw InvalidArgument("--dims needs three values, e.g. 7,5,3");
  return {v[0], v[1], v[2]};
}

FitRegion parse_region(const std::string& text) {
  // The separator is the ':' between the two (negative) levels.
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("--region expects start:end in dB, e.g. -5:-25");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw InvalidArgument("bad --region '" + text + "'");
  }
}

Rir rir_from_file(const fs::path& path, int channel) {
  const Audio audio = read_wav(path);
  if (channel < 0 || static_cast<std::size_t>(channel) >= audio.channel_count()) {
    throw InvalidArgument(path.string() + ": channel " + std::to_string(channel) + " not present");
  }
  return {audio.channels[static_cast<std::size_t>(channel)], audio.sample_rate};
}

std::vector<fs::path> wav_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError("directory " + dir.string() + " not found");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_plot(const fs::path& prefix, const Rir& rir, const FitRegion& region, const std::string& title) {
  const auto edc = energy_decay_curve(rir);
  const auto fit = estimate_rt60(edc, region);
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
  write_file(prefix.string() + ".csv", edc_csv(edc, fit));
  write_file(prefix.string() + ".svg", edc_svg(edc, fit, region, title));
}

struct CalibrateArgs {
  std::string rir_dir;
  std::string dims;
  std::string region = "-5:-25";
  double speed_of_sound = kDefaultSpeedOfSound;
  int channel = 0;
  std::string plot;
};

int cmd_calibrate(const CalibrateArgs& a, const GlobalConfig& g) {
  const Vec3 dims = parse_dims(a.dims);
  const FitRegion region = parse_region(a.region);
  const auto files = wav_files(a.rir_dir);
  if (files.empty()) throw LoadError("no RIR WAV files in " + a.rir_dir);
  std::vector<Rir> rirs;
  for (const auto& f : files) rirs.push_back(rir_from_file(f, a.channel));
  log(g, fmt::format("calibrating from {} RIRs", rirs.size()));

  const auto result = calibrate_room(rirs, dims, region, a.speed_of_sound);
  for (std::size_t i = 0; i < files.size(); ++i) {
    log(g, fmt::format("  {}: rt60 {:.4f} s (r^2 {:.4f})", files[i].filename().string(), result.per_rir[i].rt60,
                       result.per_rir[i].r_squared));
  }
  std::cout << fmt::format("rt60 {:.4f} s\nabsorption {:.4f}\nmax_order {}\nfit_slope {:.3f} dB/s\nr_squared {:.4f}\n",
                           result.rt60, result.absorption, result.max_order, result.fit_slope, result.r_squared);
  if (!a.plot.empty()) {
    // Plot the RIR whose estimate is closest to the median.
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.per_rir.size(); ++i) {
      if (std::abs(result.per_rir[i].rt60 - result.rt60) < std::abs(result.per_rir[best].rt60 - result.rt60)) best = i;
    }
    write_plot(a.plot, rirs[best], region, "Energy decay: " + files[best].filename().string());
    log(g, "wrote " + a.plot + ".csv and " + a.plot + ".svg");
  }
  return kOk;
}

struct InspectArgs {
  std::string rir;
  std::string out;
  std::string region = "-5:-25";
  int channel = 0;
};

int cmd_inspect(const InspectArgs& a, const GlobalConfig& g) {
  const FitRegion region = parse_region(a.region);
  const Rir rir = rir_from_file(a.rir, a.channel);
  const auto fit = estimate_rt60(energy_decay_curve(rir), region);
  std::cout << fmt::format("rt60 {:.4f} s\nfit_slope {:.3f} dB/s\nr_squared {:.4f}\n", fit.rt60, fit.slope_db_per_s,
                           fit.r_squared);
  write_plot(a.out, rir, region, "Energy decay: " + fs::path(a.rir).filename().string());
  log(g, "wrote " + a.out + ".csv and " + a.out + ".svg");
  return kOk;
}

struct RenderArgs {
  std::string spec;
  std::string out;
};

int cmd_render_srirs(const RenderArgs& a, const GlobalConfig& g) {
  const RoomSpec spec = load_room_spec(a.spec);
  std::size_t last_pct = 101;
  const auto bank = render_bank_to_directory(spec, a.out, g.jobs, [&](std::size_t done, std::size_t total) {
    const std::size_t pct = 100 * done / total;
    if (pct != last_pct && (pct % 5 == 0 || done == total)) {
      last_pct = pct;
      log(g, fmt::format("rendered {}/{} SRIRs", done, total));
    }
  });
  std::cout << fmt::format("room {}: {} SRIRs, absorption {:.4f}, max_order {}\nchecksum {}\n", spec.name,
                           bank.size(), bank.room.absorption, bank.room.max_order, bank.checksum);
  return kOk;
}

struct SynthArgs {
  std::string spec_dir;
  std::string corpus;
  std::string out;
  std::string labels;
  double scale = 1.0;
  bool noise = false;
  double noise_dbfs = -60.0;
  bool proportional_classes = false;
};

int cmd_synthesize(const SynthArgs& a, const GlobalConfig& g) {
  if (!g.seed) throw InvalidArgument("--seed (or SRIRFORGE_SEED) is required");
  if (!fs::is_directory(a.spec_dir)) throw ConfigError("spec directory " + a.spec_dir + " not found");

  std::vector<fs::path> items;
  for (const auto& e : fs::directory_iterator(a.spec_dir)) items.push_back(e.path());
  std::sort(items.begin(), items.end());
  std::vector<SrirBank> banks;
  for (const auto& p : items) {
    if (fs::is_directory(p) && fs::exists(p / kManifestName)) {
      banks.push_back(open_bank(p));
      log(g, "opened bank " + p.string());
    } else if (p.extension() == ".json") {
      const RoomSpec spec = load_room_spec(p);
      const fs::path dir = fs::path(a.out) / "banks" / spec.name;
      log(g, "rendering bank for " + p.string());
      banks.push_back(render_bank_to_directory(spec, dir, g.jobs));
    }
  }

  const LabelMap labels = a.labels.empty() ? default_label_map(a.corpus) : read_label_map(a.labels);
  const Corpus corpus = ingest_corpus(a.corpus, labels);
  for (const auto& w : corpus.warnings) log(g, "warning: " + w);
  if (corpus.clips.empty()) throw ConfigError("corpus " + a.corpus + " has no usable clips");

  DatasetConfig config;
  config.scale = a.scale;
  config.jobs = g.jobs;
  config.mix.add_noise = a.noise;
  config.mix.noise_dbfs = a.noise_dbfs;
  config.mix.uniform_classes = !a.proportional_classes;
  log(g, fmt::format("synthesizing {} train + {} val mixtures from {} rooms and {} clips", config.train_count(),
                     config.val_count(), banks.size(), corpus.clips.size()));
  const auto manifest = generate_dataset(banks, corpus, config, *g.seed, a.out);
  std::cout << fmt::format("wrote {} mixtures to {}\n", manifest.mixtures.size(), a.out);
  return kOk;
}

struct EvalArgs {
  std::string ref;
  std::string pred;
  double threshold = 20.0;
  int segment_frames = 1;
  std::string csv;
};

// Directory inputs are scored as one pooled frame sequence; a missing
// prediction file counts as an empty prediction.
std::pair<FrameAnnotations, FrameAnnotations> load_pair(const fs::path& ref, const fs::path& pred) {
  if (!fs::is_directory(ref)) {
    return {read_annotations(ref), fs::exists(pred) ? read_annotations(pred) : FrameAnnotations{}};
  }
  std::vector<fs::path> refs;
  for (const auto& e : fs::recursive_directory_iterator(ref)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") refs.push_back(e.path());
  }
  std::sort(refs.begin(), refs.end());
  FrameAnnotations all_ref, all_pred;
  int offset = 0;
  for (const auto& r : refs) {
    const fs::path p = pred / fs::relative(r, ref);
    auto rows = read_annotations(r);
    auto prows = fs::exists(p) ? read_annotations(p) : FrameAnnotations{};
    int max_frame = -1;
    for (auto& row : rows) {
      max_frame = std::max(max_frame, row.frame);
      row.frame += offset;
      all_ref.push_back(row);
    }
    for (auto& row : prows) {
      max_frame = std::max(max_frame, row.frame);
      row.frame += offset;
      all_pred.push_back(row);
    }
    offset += max_frame + 1;
  }
  return {all_ref, all_pred};
}

int cmd_evaluate(const EvalArgs& a, const GlobalConfig&) {
  if (!fs::exists(a.ref)) throw LoadError("reference " + a.ref + " not found");
  const auto [ref, pred] = load_pair(a.ref, a.pred);
  const auto scores = compute_scores(ref, pred, {a.threshold, a.segment_frames});
  std::cout << report(scores, ReportFormat::kText);
  if (!a.csv.empty()) write_file(a.csv, report(scores, ReportFormat::kCsv));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srirforge: image-source SRIR simulation and SELD dataset tooling"};
  app.require_subcommand(1);
  GlobalConfig global;
  std::uint64_t seed_flag = 0;
  auto* seed_opt = app.add_option("--seed", seed_flag, "Master seed (falls back to SRIRFORGE_SEED)");
  app.add_option("--jobs,-j", global.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--quiet,-q", global.quiet, "Suppress progress output");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Estimate RT60, absorption and reflection order from RIRs");
  calibrate->add_option("--rir-dir", cal.rir_dir, "Directory of RIR WAV files")->required();
  calibrate->add_option("--dims", cal.dims, "Room dimensions Lx,Ly,Lz in meters")->required();
  calibrate->add_option("--region", cal.region, "Fit region start:end in dB")->capture_default_str();
  calibrate->add_option("--speed-of-sound", cal.speed_of_sound)->capture_default_str();
  calibrate->add_option("--channel", cal.channel, "Channel to analyse")->capture_default_str();
  calibrate->add_option("--plot", cal.plot, "Write <prefix>.csv and <prefix>.svg of the decay curve");

  InspectArgs ins;
  auto* inspect = app.add_subcommand("inspect", "Export one RIR's energy decay curve and fit");
  inspect->add_option("rir", ins.rir, "RIR WAV file")->required();
  inspect->add_option("--out", ins.out, "Output prefix")->required();
  inspect->add_option("--region", ins.region)->capture_default_str();
  inspect->add_option("--channel", ins.channel)->capture_default_str();

  RenderArgs ren;
  auto* render = app.add_subcommand("render-srirs", "Render an SRIR bank from a room spec");
  render->add_option("--spec", ren.spec, "Room spec JSON")->required();
  render->add_option("--out", ren.out, "Output directory")->required();
  render->add_option("--jobs,-j", global.jobs)->check(CLI::PositiveNumber);

  SynthArgs syn;
  auto* synth = app.add_subcommand("synthesize", "Synthesize a fold-structured SELD dataset");
  synth->add_option("--spec-dir", syn.spec_dir, "Directory of bank directories and/or room spec JSONs")->required();
  synth->add_option("--corpus", syn.corpus, "Labelled event corpus (<label>/*.wav)")->required();
  synth->add_option("--out", syn.out, "Output directory")->required();
  synth->add_option("--seed", seed_flag, "Master seed");
  synth->add_option("--scale", syn.scale, "Fraction of the 900/300 mixture preset")->capture_default_str();
  synth->add_option("--labels", syn.labels, "JSON label map {\"name\": id}");
  synth->add_flag("--noise", syn.noise, "Add white noise to every mixture");
  synth->add_option("--noise-dbfs", syn.noise_dbfs)->capture_default_str();
  synth->add_flag("--proportional-classes", syn.proportional_classes,
                  "Draw event classes in proportion to clip counts instead of uniformly");
  synth->add_option("--jobs,-j", global.jobs)->check(CLI::PositiveNumber);

  EvalArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against reference annotations");
  evaluate->add_option("--ref", ev.ref, "Reference CSV file or directory")->required();
  evaluate->add_option("--pred", ev.pred, "Prediction CSV file or directory")->required();
  evaluate->add_option("--threshold", ev.threshold, "Spatial threshold in degrees")->capture_default_str();
  evaluate->add_option("--segment-frames", ev.segment_frames)->capture_default_str();
  evaluate->add_option("--csv", ev.csv, "Write the machine-readable report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  if (seed_opt->count() > 0 || synth->get_option("--seed")->count() > 0) {
    global.seed = seed_flag;
  } else if (const char* env = std::getenv("SRIRFORGE_SEED")) {
    try {
      global.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: SRIRFORGE_SEED is not an unsigned integer\n";
      return kInput;
    }
  }

  try {
    if (*calibrate) return cmd_calibrate(cal, global);
    if (*inspect) return cmd_inspect(ins, global);
    if (*render) return cmd_render_srirs(ren, global);
    if (*synth) return cmd_synthesize(syn, global);
    if (*evaluate) return cmd_evaluate(ev, global);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const InsufficientData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInsufficient;
  } catch (const InfeasibleRoom& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const SchedulingFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kScheduling;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
