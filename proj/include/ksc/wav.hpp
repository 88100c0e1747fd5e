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

#pragma once

#include <string>
#include <vector>

#include "ksc/dsp.hpp"

namespace ksc {

enum class WavEncoding { kPcm16, kFloat32 };

struct WavReadResult {
  Waveform waveform;
  WavEncoding encoding = WavEncoding::kPcm16;
  // Set when a multichannel file was averaged down to mono.
  bool downmixed = false;
};

// Reads RIFF/WAVE with 16-bit PCM or 32-bit IEEE float samples. PCM samples
// are scaled by 1/32768, so full scale positive is 32767/32768. Channels are
// averaged to mono. Throws kFormat for anything else.
WavReadResult read_wav_detailed(const std::string& path);
Waveform read_wav(const std::string& path);

// PCM16 writes round(x * 32768) clamped to [-32768, 32767].
void write_wav(const Waveform& wave, const std::string& path,
               WavEncoding encoding = WavEncoding::kFloat32);

std::vector<char> encode_wav(const Waveform& wave, WavEncoding encoding);
WavReadResult decode_wav(const std::vector<char>& bytes);

}  // namespace ksc
