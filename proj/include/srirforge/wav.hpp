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

#ifndef SRIRFORGE_WAV_HPP_
#define SRIRFORGE_WAV_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace srirforge {

// Planar multichannel audio. All channels have the same length.
struct Audio {
  double sample_rate = 24000.0;
  std::vector<std::vector<double>> channels;

  std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }
  std::size_t channel_count() const { return channels.size(); }
};

enum class SampleFormat { kPcm16, kPcm24, kPcm32, kFloat32 };

// RIFF/WAVE encoding. More than two channels are written as
// WAVE_FORMAT_EXTENSIBLE; PCM samples are rounded and clipped to full scale.
std::string encode_wav(const Audio& audio, SampleFormat format);
Audio decode_wav(std::string_view bytes, const std::string& origin = "<memory>");

void write_wav(const std::filesystem::path& path, const Audio& audio, SampleFormat format);
Audio read_wav(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace srirforge

#endif  // SRIRFORGE_WAV_HPP_
