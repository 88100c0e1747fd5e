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

#include "ksc/signal.hpp"

#include <string>
#include <utility>

#include "ksc/error.hpp"

namespace ksc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kKeyMismatch: return "key-mismatch";
    case ErrorCode::kWrongCipher: return "wrong-cipher";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kStructural: return "structural";
    case ErrorCode::kDegenerateRange: return "degenerate-range";
    case ErrorCode::kUndefinedReference: return "undefined-reference";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
  }
  return "unknown";
}

std::string_view to_string(Mode mode) {
  return mode == Mode::k1d ? "1d" : "2d";
}

std::string_view to_string(CipherKind cipher) {
  return cipher == CipherKind::kShuffle ? "shuffle" : "flip";
}

Mode parse_mode(std::string_view text) {
  if (text == "1d") return Mode::k1d;
  if (text == "2d") return Mode::k2d;
  fail(ErrorCode::kParse, "mode: expected 1d or 2d, got '" + std::string(text) + "'");
}

CipherKind parse_cipher(std::string_view text) {
  if (text == "shuffle") return CipherKind::kShuffle;
  if (text == "flip") return CipherKind::kFlip;
  fail(ErrorCode::kParse,
       "cipher: expected shuffle or flip, got '" + std::string(text) + "'");
}

Signal Signal::sequence(std::vector<double> samples) {
  Signal s;
  s.mode = Mode::k1d;
  s.rows = samples.size();
  s.cols = 1;
  s.values = std::move(samples);
  return s;
}

Signal Signal::matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> values) {
  if (values.size() != rows * cols) {
    fail(ErrorCode::kShapeMismatch,
         "matrix: " + std::to_string(values.size()) + " values for " +
             std::to_string(rows) + "x" + std::to_string(cols));
  }
  Signal s;
  s.mode = Mode::k2d;
  s.rows = rows;
  s.cols = cols;
  s.values = std::move(values);
  return s;
}

}  // namespace ksc
