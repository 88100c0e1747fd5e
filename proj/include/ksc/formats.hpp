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
#include "ksc/patch_embed.hpp"

namespace ksc {

// Binary file formats. All integers are little-endian u32, all reals
// little-endian IEEE-754 binary64.
//
//   SPG1  T F sample_rate hop window_length fft_size kind:u8  T*F reals
//   STC1  same header (kind ignored)            T*F (re, im) pairs
//   KRN1  P d mode:u8 (0 = 1d, 1 = 2d)          P*P*d or P*d reals, (i, j, c)
//   EMB1  rows cols d mode:u8                   rows*cols*d reals

enum class FileKind { kSpectrogram, kComplexSpectrogram, kKernel, kEmbedding, kWav, kKey, kUnknown };

FileKind sniff_file(const std::string& path);

std::vector<char> encode_spectrogram(const Spectrogram& spec);
Spectrogram decode_spectrogram(const std::vector<char>& bytes);
void write_spectrogram(const Spectrogram& spec, const std::string& path);
Spectrogram read_spectrogram(const std::string& path);

void write_complex_spectrogram(const ComplexSpectrogram& spec, const std::string& path);
ComplexSpectrogram read_complex_spectrogram(const std::string& path);

std::vector<char> encode_kernel(const PatchEmbedKernel& kernel);
PatchEmbedKernel decode_kernel(const std::vector<char>& bytes);
void write_kernel(const PatchEmbedKernel& kernel, const std::string& path);
PatchEmbedKernel read_kernel(const std::string& path);

void write_embedding(const Embedding& emb, const std::string& path);
Embedding read_embedding(const std::string& path);

std::vector<char> read_file_bytes(const std::string& path);
void write_file_bytes(const std::vector<char>& bytes, const std::string& path);

}  // namespace ksc
