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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ksc/signal.hpp"

namespace ksc {

struct Waveform {
  std::vector<double> samples;
  std::uint32_t sample_rate = 16000;

  Signal to_signal() const { return Signal::sequence(samples); }
  static Waveform from_signal(const Signal& s, std::uint32_t sample_rate);
};

// Hann-windowed STFT. Defaults are common 16 kHz speech settings: 25 ms
// window, 10 ms hop, 512-point FFT.
struct StftParams {
  std::uint32_t window_length = 400;
  std::uint32_t hop = 160;
  std::uint32_t fft_size = 512;
  std::uint32_t sample_rate = 16000;

  std::size_t bins() const { return fft_size / 2 + 1; }
  // Throws kInvalidParameter unless 1 <= hop <= window_length <= fft_size
  // and the squared window overlap-adds to a sum bounded away from zero.
  void validate() const;

  friend bool operator==(const StftParams&, const StftParams&) = default;
};

// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

struct ComplexSpectrogram {
  std::size_t frames = 0;  // T
  std::size_t bins = 0;    // fft_size / 2 + 1
  StftParams params;
  std::vector<std::complex<double>> values;  // frame-major

  std::complex<double>& at(std::size_t t, std::size_t k) { return values[t * bins + k]; }
  std::complex<double> at(std::size_t t, std::size_t k) const { return values[t * bins + k]; }
};

enum class SpectrogramKind : std::uint8_t {
  kLinearMagnitude = 0,
  kLogMagnitude = 1,
  kLogMel = 2,
};

std::string_view to_string(SpectrogramKind kind);

struct Spectrogram {
  Signal values;  // 2d, T x F
  SpectrogramKind kind = SpectrogramKind::kLinearMagnitude;
  StftParams params;

  std::size_t frames() const { return values.rows; }
  std::size_t channels() const { return values.cols; }
};

constexpr double kLogFloor = 1e-10;

// Frame t starts at sample t * hop - window_length / 2 (zeros outside the
// signal); T = ceil(N / hop) + 1, so every sample sits near the centre of
// some frame.
ComplexSpectrogram stft(const Waveform& x, const StftParams& params);

// Least-squares overlap-add inverse: sum_t w * frame_t / sum_t w^2. Returns
// (T - 1) * hop samples, or `length` samples when length > 0 (truncated or
// zero-extended).
Waveform istft(const ComplexSpectrogram& spec, std::size_t length = 0);

Spectrogram magnitude(const ComplexSpectrogram& spec);
// ln(|X| + 1e-10).
Spectrogram log_magnitude(const ComplexSpectrogram& spec);
// ln(mel power + 1e-10) with the area-normalized filterbank below.
Spectrogram log_mel(const ComplexSpectrogram& spec, std::size_t n_mels = 80);
// Inverse of log_magnitude: max(exp(v) - 1e-10, 0).
Spectrogram linear_from_log_magnitude(const Spectrogram& spec);

// Values on a linear scale: log magnitude is undone, log-mel becomes mel
// energy, linear magnitude is returned as is.
Signal magnitude_view(const Spectrogram& spec);

// n_mels x bins triangular filters on the HTK mel scale spanning 0 Hz to
// Nyquist. With area_normalize each triangle is scaled by 2 / (f_hi - f_lo);
// without it the triangles peak at 1 and overlap-add to 1 between the first
// and last centre frequencies.
std::vector<std::vector<double>> mel_filterbank(std::size_t n_mels, std::size_t fft_size,
                                                double sample_rate,
                                                bool area_normalize = true);

struct ScaleRecord {
  double min = 0.0;
  double max = 0.0;
};

struct ByteScaled {
  Spectrogram spectrogram;
  ScaleRecord record;
};

// Affine map onto [0, 255]: the minimum lands on exactly 0 and the maximum
// on exactly 255. Throws kDegenerateRange for constant input.
ByteScaled scale_to_byte_range(const Spectrogram& spec);
Signal scale_to_byte_range(const Signal& values, ScaleRecord* record);
Spectrogram unscale_from_byte_range(const Spectrogram& scaled, const ScaleRecord& record);

// Binary PGM (P5), width T and height F, first row = highest frequency.
// Values are mapped to [0, 255] and rounded; constant input becomes mid gray.
void export_spectrogram_image(const Spectrogram& spec, const std::string& path);
std::vector<std::uint8_t> spectrogram_pixels(const Spectrogram& spec);

}  // namespace ksc
