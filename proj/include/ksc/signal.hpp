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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ksc {

// 1d: waveform-like sequences, blocks of length M.
// 2d: time-frequency matrices, blocks of M x M.
enum class Mode { k1d, k2d };

enum class CipherKind { kShuffle, kFlip };

std::string_view to_string(Mode mode);
std::string_view to_string(CipherKind cipher);
Mode parse_mode(std::string_view text);
CipherKind parse_cipher(std::string_view text);

// Real-valued signal carrier shared by the cipher, blocking and embedding
// code. A 2d signal is a rows x cols matrix stored time-major row-major
// (rows = T time frames, cols = F frequency bins). A 1d signal of N samples
// is stored with rows = N and cols = 1.
struct Signal {
  Mode mode = Mode::k1d;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  static Signal sequence(std::vector<double> samples);
  static Signal matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values);

  std::size_t size() const { return values.size(); }
  // Number of samples for 1d, T for 2d.
  std::size_t length() const { return rows; }

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }

  friend bool operator==(const Signal&, const Signal&) = default;
};

}  // namespace ksc
