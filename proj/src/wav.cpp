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

#include "srirforge/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "srirforge/error.hpp"

namespace srirforge {
namespace {

static_assert(std::endian::native == std::endian::little, "WAV codec assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

// KSDATAFORMAT_SUBTYPE_{PCM,IEEE_FLOAT} share everything but the first two
// bytes.
constexpr unsigned char kSubtypeTail[14] = {0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x80,
                                            0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71};

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T get(std::string_view bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

std::int32_t to_pcm(double v, int bits) {
  const double scale = static_cast<double>((std::int64_t{1} << (bits - 1)) - 1);
  const double clipped = std::clamp(v, -1.0, 1.0);
  return static_cast<std::int32_t>(std::lround(clipped * scale));
}

}  // namespace

std::string encode_wav(const Audio& audio, SampleFormat format) {
  const auto channels = static_cast<std::uint16_t>(audio.channel_count());
  if (channels == 0) throw InvalidArgument("cannot encode audio without channels");
  const std::size_t frames = audio.frames();
  for (const auto& ch : audio.channels) {
    if (ch.size() != frames) throw InvalidArgument("channels differ in length");
  }

  std::uint16_t bits = 16;
  bool is_float = false;
  switch (format) {
    case SampleFormat::kPcm16:
      bits = 16;
      break;
    case SampleFormat::kPcm24:
      bits = 24;
      break;
    case SampleFormat::kPcm32:
      bits = 32;
      break;
    case SampleFormat::kFloat32:
      bits = 32;
      is_float = true;
      break;
  }
  const std::uint16_t block_align = channels * (bits / 8);
  const auto rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate));
  const std::uint64_t data_bytes = static_cast<std::uint64_t>(frames) * block_align;
  if (data_bytes > 0xFFFFFFFFull - 80) throw InvalidArgument("audio too long for a RIFF file");

  const bool extensible = channels > 2;
  const std::uint32_t fmt_size = extensible ? 40 : 16;
  const bool needs_fact = is_float;

  std::string out;
  out.reserve(static_cast<std::size_t>(data_bytes) + 80);
  out.append("RIFF");
  put<std::uint32_t>(out, 0);  // patched below
  out.append("WAVE");
  out.append("fmt ");
  put<std::uint32_t>(out, fmt_size);
  put<std::uint16_t>(out, extensible ? kFormatExtensible : (is_float ? kFormatFloat : kFormatPcm));
  put<std::uint16_t>(out, channels);
  put<std::uint32_t>(out, rate);
  put<std::uint32_t>(out, rate * block_align);
  put<std::uint16_t>(out, block_align);
  put<std::uint16_t>(out, bits);
  if (extensible) {
    put<std::uint16_t>(out, 22);
    put<std::uint16_t>(out, bits);
    put<std::uint32_t>(out, 0);  // no speaker mapping: these are capsule signals
    put<std::uint16_t>(out, is_float ? kFormatFloat : kFormatPcm);
    out.append(reinterpret_cast<const char*>(kSubtypeTail), sizeof(kSubtypeTail));
  }
  if (needs_fact) {
    out.append("fact");
    put<std::uint32_t>(out, 4);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(frames));
  }
  out.append("data");
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data_bytes));

  for (std::size_t f = 0; f < frames; ++f) {
    for (const auto& ch : audio.channels) {
      const double v = ch[f];
      if (is_float) {
        put<float>(out, static_cast<float>(v));
      } else if (bits == 16) {
        put<std::int16_t>(out, static_cast<std::int16_t>(to_pcm(v, 16)));
      } else if (bits == 24) {
        const std::int32_t s = to_pcm(v, 24);
        out.push_back(static_cast<char>(s & 0xFF));
        out.push_back(static_cast<char>((s >> 8) & 0xFF));
        out.push_back(static_cast<char>((s >> 16) & 0xFF));
      } else {
        put<std::int32_t>(out, to_pcm(v, 32));
      }
    }
  }
  const auto riff_size = static_cast<std::uint32_t>(out.size() - 8);
  std::memcpy(out.data() + 4, &riff_size, sizeof(riff_size));
  return out;
}

Audio decode_wav(std::string_view bytes, const std::string& origin) {
  auto fail = [&](const std::string& why) { return LoadError(origin + ": " + why); };
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    throw fail("not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::string_view data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const auto size = get<std::uint32_t>(bytes, pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (id == "fmt ") {
      if (size < 16 || body + 16 > bytes.size()) throw fail("truncated fmt chunk");
      format = get<std::uint16_t>(bytes, body);
      channels = get<std::uint16_t>(bytes, body + 2);
      rate = get<std::uint32_t>(bytes, body + 4);
      bits = get<std::uint16_t>(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (size < 40 || body + 26 > bytes.size()) throw fail("truncated extensible fmt chunk");
        format = get<std::uint16_t>(bytes, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.substr(body, avail);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw fail("missing fmt chunk");
  if (!have_data) throw fail("missing data chunk");
  if (channels == 0) throw fail("zero channels");
  const bool is_float = format == kFormatFloat;
  if (!(format == kFormatPcm || is_float)) throw fail("unsupported sample format " + std::to_string(format));
  if (is_float ? !(bits == 32 || bits == 64) : !(bits == 8 || bits == 16 || bits == 24 || bits == 32)) {
    throw fail("unsupported bit depth " + std::to_string(bits));
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frames = data.size() / (bytes_per_sample * channels);
  Audio audio;
  audio.sample_rate = rate;
  audio.channels.assign(channels, std::vector<double>(frames));
  std::size_t off = 0;
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t c = 0; c < channels; ++c, off += bytes_per_sample) {
      double v = 0.0;
      if (is_float) {
        v = bits == 32 ? static_cast<double>(get<float>(data, off)) : get<double>(data, off);
      } else if (bits == 8) {
        v = (static_cast<double>(static_cast<unsigned char>(data[off])) - 128.0) / 127.0;
      } else if (bits == 16) {
        v = get<std::int16_t>(data, off) / 32767.0;
      } else if (bits == 24) {
        std::int32_t s = static_cast<unsigned char>(data[off]) |
                         (static_cast<unsigned char>(data[off + 1]) << 8) |
                         (static_cast<unsigned char>(data[off + 2]) << 16);
        if (s & 0x800000) s -= 0x1000000;
        v = s / 8388607.0;
      } else {
        v = get<std::int32_t>(data, off) / 2147483647.0;
      }
      audio.channels[c][f] = v;
    }
  }
  return audio;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw LoadError("error reading " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidArgument("error writing " + path.string());
}

void write_wav(const std::filesystem::path& path, const Audio& audio, SampleFormat format) {
  write_file(path, encode_wav(audio, format));
}

Audio read_wav(const std::filesystem::path& path) { return decode_wav(read_file(path), path.string()); }

}  // namespace srirforge
