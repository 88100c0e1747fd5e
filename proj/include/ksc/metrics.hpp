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

#include <span>

#include "ksc/signal.hpp"

namespace ksc {

struct DiffStats {
  double max_rel = 0.0;
  double mean_rel = 0.0;
  double max_abs = 0.0;
};

// Elementwise |a - b| / max(|a|, |b|, 1e-300). Throws kShapeMismatch.
DiffStats tensor_diff(std::span<const double> a, std::span<const double> b);

// Reported in place of +inf when the error energy underflows.
constexpr double kSnrCapDb = 99.0;

// 10 log10(sum ref^2 / sum (ref - test)^2), capped at kSnrCapDb.
// Throws kShapeMismatch on length mismatch, kUndefinedReference when the
// reference is all zeros.
double snr_db(std::span<const double> reference, std::span<const double> test);

constexpr double kLsdFloor = 1e-10;

// Log-spectral distance in dB between two linear magnitude spectrograms of
// equal shape (T x F): mean over frames of the RMS over bins of
// 20 log10((|a| + eps) / (|b| + eps)).
double lsd_db(const Signal& magnitude_a, const Signal& magnitude_b);

}  // namespace ksc
