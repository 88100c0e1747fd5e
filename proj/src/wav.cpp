/*
 * Copyright 2026 The ksc Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ksc/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ksc/error.hpp"

namespace ksc {
namespace {

template <typename T>
T read_le(const std::vector<char>& bytes, std::size_t offset) {
  if (offset + sizeof(T) > bytes.size()) fail(ErrorCode::kFormat, "truncated WAV file");
  T value{};
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, bytes.data() + offset, sizeof(T));
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) acc |= std::uint64_t{raw[i]} << (8 * i);
  if constexpr (sizeof(T) == 4) {
    std::uint32_t u = static_cast<std::uint32_t>(acc);
    std::memcpy(&value, &u, 4);
  } else {
    auto u = static_cast<std::uint16_t>(acc);
    std::memcpy(&value, &u, 2);
  }
  return value;
}

template <typename T>
void put_le(std::vector<char>& out, T value) {
  std::uint64_t u = 0;
  std::memcpy(&u, &value, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
  }
}

void put_tag(std::vector<char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

bool tag_is(const std::vector<char>& bytes, std::size_t offset, const char* tag) {
  return offset + 4 <= bytes.size() && std::memcmp(bytes.data() + offset, tag, 4) == 0;
}

}  // namespace

WavReadResult decode_wav(const std::vector<char>& bytes) {
  if (!tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    fail(ErrorCode::kFormat, "not a RIFF/WAVE file");
  }
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const auto size = read_le<std::uint32_t>(bytes, pos + 4);
    if (tag_is(bytes, pos, "fmt ")) {
      format = read_le<std::uint16_t>(bytes, pos + 8);
      channels = read_le<std::uint16_t>(bytes, pos + 10);
      rate = read_le<std::uint32_t>(bytes, pos + 12);
      bits = read_le<std::uint16_t>(bytes, pos + 22);
      if (format == 0xFFFE && size >= 40) {
        // WAVE_FORMAT_EXTENSIBLE: the sub-format GUID starts with the tag.
        format = read_le<std::uint16_t>(bytes, pos + 32);
      }
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      data_offset = pos + 8;
      data_size = std::min<std::size_t>(size, bytes.size() - data_offset);
      break;
    }
    pos += 8 + size + (size & 1u);
  }
  if (!have_fmt || data_offset == 0) fail(ErrorCode::kFormat, "WAV file lacks fmt or data chunk");
  if (channels == 0 || rate == 0) fail(ErrorCode::kFormat, "WAV header has zero channels or rate");

  WavReadResult result;
  if (format == 1 && bits == 16) {
    result.encoding = WavEncoding::kPcm16;
  } else if (format == 3 && bits == 32) {
    result.encoding = WavEncoding::kFloat32;
  } else {
    fail(ErrorCode::kFormat, "unsupported WAV encoding (format " + std::to_string(format) +
                                 ", " + std::to_string(bits) + " bits)");
  }
  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  result.waveform.sample_rate = rate;
  result.waveform.samples.resize(frames);
  result.downmixed = channels > 1;
  for (std::size_t n = 0; n < frames; ++n) {
    double acc = 0.0;
    for (std::size_t ch = 0; ch < channels; ++ch) {
      const std::size_t off = data_offset + (n * channels + ch) * width;
      if (result.encoding == WavEncoding::kPcm16) {
        acc += static_cast<double>(read_le<std::int16_t>(bytes, off)) / 32768.0;
      } else {
        acc += static_cast<double>(read_le<float>(bytes, off));
      }
    }
    result.waveform.samples[n] = channels > 1 ? acc / channels : acc;
  }
  return result;
}

std::vector<char> encode_wav(const Waveform& wave, WavEncoding encoding) {
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t data_size = static_cast<std::uint32_t>(wave.samples.size() * (bits / 8));
  std::vector<char> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_le<std::uint32_t>(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, pcm ? 1 : 3);
  put_le<std::uint16_t>(out, 1);
  put_le<std::uint32_t>(out, wave.sample_rate);
  put_le<std::uint32_t>(out, wave.sample_rate * (bits / 8));
  put_le<std::uint16_t>(out, bits / 8);
  put_le<std::uint16_t>(out, bits);
  put_tag(out, "data");
  put_le<std::uint32_t>(out, data_size);
  for (double x : wave.samples) {
    if (pcm) {
      const double s = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
      put_le<std::int16_t>(out, static_cast<std::int16_t>(s));
    } else {
      put_le<float>(out, static_cast<float>(x));
    }
  }
  return out;
}

WavReadResult read_wav_detailed(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

Waveform read_wav(const std::string& path) { return read_wav_detailed(path).waveform; }

void write_wav(const Waveform& wave, const std::string& path, WavEncoding encoding) {
  if (wave.sample_rate == 0) fail(ErrorCode::kInvalidParameter, "sample rate must be positive");
  const auto bytes = encode_wav(wave, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace ksc
