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

#include "ksc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ksc/error.hpp"

namespace ksc {

DiffStats tensor_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::kShapeMismatch, "tensor_diff: sizes " + std::to_string(a.size()) +
                                        " and " + std::to_string(b.size()));
  }
  DiffStats s;
  if (a.empty()) return s;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    const double den = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
    const double rel = diff / den;
    s.max_abs = std::max(s.max_abs, diff);
    s.max_rel = std::max(s.max_rel, rel);
    sum += rel;
  }
  s.mean_rel = sum / static_cast<double>(a.size());
  return s;
}

double snr_db(std::span<const double> reference, std::span<const double> test) {
  if (reference.size() != test.size()) {
    fail(ErrorCode::kShapeMismatch, "snr_db: lengths " + std::to_string(reference.size()) +
                                        " and " + std::to_string(test.size()));
  }
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    signal += reference[i] * reference[i];
    const double e = reference[i] - test[i];
    noise += e * e;
  }
  if (signal == 0.0) fail(ErrorCode::kUndefinedReference, "snr_db: reference is all zeros");
  if (noise <= signal * std::pow(10.0, -kSnrCapDb / 10.0)) return kSnrCapDb;
  return 10.0 * std::log10(signal / noise);
}

double lsd_db(const Signal& magnitude_a, const Signal& magnitude_b) {
  if (magnitude_a.rows != magnitude_b.rows || magnitude_a.cols != magnitude_b.cols) {
    fail(ErrorCode::kShapeMismatch, "lsd_db: spectrogram shapes differ");
  }
  if (magnitude_a.rows == 0 || magnitude_a.cols == 0) return 0.0;
  double total = 0.0;
  for (std::size_t t = 0; t < magnitude_a.rows; ++t) {
    double acc = 0.0;
    for (std::size_t f = 0; f < magnitude_a.cols; ++f) {
      const double d = 20.0 * std::log10((std::abs(magnitude_a.at(t, f)) + kLsdFloor) /
                                         (std::abs(magnitude_b.at(t, f)) + kLsdFloor));
      acc += d * d;
    }
    total += std::sqrt(acc / static_cast<double>(magnitude_a.cols));
  }
  return total / static_cast<double>(magnitude_a.rows);
}

}  // namespace ksc
