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

#include "ksc/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <string>

#include "ksc/error.hpp"
#include "ksc/fft.hpp"
#include "ksc/parallel.hpp"

namespace ksc {
namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Spectrogram make_spectrogram(const ComplexSpectrogram& spec, std::size_t cols,
                             SpectrogramKind kind) {
  Spectrogram out;
  out.kind = kind;
  out.params = spec.params;
  out.values = Signal::matrix(spec.frames, cols, std::vector<double>(spec.frames * cols));
  return out;
}

}  // namespace

Waveform Waveform::from_signal(const Signal& s, std::uint32_t sample_rate) {
  if (s.mode != Mode::k1d) fail(ErrorCode::kKeyMismatch, "waveform needs a 1d signal");
  return {s.values, sample_rate};
}

std::string_view to_string(SpectrogramKind kind) {
  switch (kind) {
    case SpectrogramKind::kLinearMagnitude: return "linear_magnitude";
    case SpectrogramKind::kLogMagnitude: return "log_magnitude";
    case SpectrogramKind::kLogMel: return "log_mel";
  }
  return "unknown";
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

void StftParams::validate() const {
  if (sample_rate == 0) fail(ErrorCode::kInvalidParameter, "sample rate must be positive");
  if (window_length < 2 || hop < 1 || hop > window_length || window_length > fft_size) {
    fail(ErrorCode::kInvalidParameter,
         "STFT needs 1 <= hop <= window <= fft (hop=" + std::to_string(hop) +
             " window=" + std::to_string(window_length) +
             " fft=" + std::to_string(fft_size) + ")");
  }
  const auto w = hann_window(window_length);
  double lo = INFINITY;
  double hi = 0.0;
  for (std::size_t p = 0; p < hop; ++p) {
    double s = 0.0;
    for (std::size_t i = p; i < window_length; i += hop) s += w[i] * w[i];
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (!(lo > 1e-3 * hi)) {
    fail(ErrorCode::kInvalidParameter,
         "window/hop combination does not overlap-add to a usable sum (hop=" +
             std::to_string(hop) + " window=" + std::to_string(window_length) + ")");
  }
}

ComplexSpectrogram stft(const Waveform& x, const StftParams& params) {
  params.validate();
  if (x.samples.empty()) fail(ErrorCode::kInvalidParameter, "empty waveform");
  const std::size_t n = x.samples.size();
  const std::size_t hop = params.hop;
  const std::size_t win = params.window_length;
  const std::size_t pad = win / 2;

  ComplexSpectrogram out;
  out.params = params;
  out.frames = (n + hop - 1) / hop + 1;
  out.bins = params.bins();
  out.values.assign(out.frames * out.bins, {});

  const auto w = hann_window(win);
  parallel_for(out.frames, [&](std::size_t t) {
    thread_local std::unique_ptr<RealFft> fft;
    if (!fft || fft->size() != params.fft_size) fft = std::make_unique<RealFft>(params.fft_size);
    std::vector<double> frame(params.fft_size, 0.0);
    for (std::size_t i = 0; i < win; ++i) {
      // Signed position of this tap relative to the signal start.
      const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(t * hop + i) -
                                 static_cast<std::ptrdiff_t>(pad);
      if (pos >= 0 && static_cast<std::size_t>(pos) < n) frame[i] = w[i] * x.samples[pos];
    }
    fft->forward(frame, std::span(out.values.data() + t * out.bins, out.bins));
  });
  return out;
}

Waveform istft(const ComplexSpectrogram& spec, std::size_t length) {
  spec.params.validate();
  if (spec.bins != spec.params.bins() || spec.values.size() != spec.frames * spec.bins ||
      spec.frames == 0) {
    fail(ErrorCode::kStructural, "complex spectrogram shape does not match its parameters");
  }
  const std::size_t hop = spec.params.hop;
  const std::size_t win = spec.params.window_length;
  const std::size_t nfft = spec.params.fft_size;
  const std::size_t pad = win / 2;
  const std::size_t padded = (spec.frames - 1) * hop + win;

  const auto w = hann_window(win);
  std::vector<double> frames(spec.frames * win);
  parallel_for(spec.frames, [&](std::size_t t) {
    thread_local std::unique_ptr<RealFft> fft;
    if (!fft || fft->size() != nfft) fft = std::make_unique<RealFft>(nfft);
    std::vector<double> buf(nfft);
    fft->inverse(std::span(spec.values.data() + t * spec.bins, spec.bins), buf);
    const double scale = 1.0 / static_cast<double>(nfft);
    for (std::size_t i = 0; i < win; ++i) frames[t * win + i] = buf[i] * scale * w[i];
  });

  // Sequential overlap-add keeps the summation order fixed.
  std::vector<double> acc(padded, 0.0);
  std::vector<double> norm(padded, 0.0);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t i = 0; i < win; ++i) {
      acc[t * hop + i] += frames[t * win + i];
      norm[t * hop + i] += w[i] * w[i];
    }
  }
  const std::size_t natural = (spec.frames - 1) * hop;
  const std::size_t out_len = length > 0 ? length : natural;
  Waveform out;
  out.sample_rate = spec.params.sample_rate;
  out.samples.assign(out_len, 0.0);
  for (std::size_t n = 0; n < std::min(out_len, natural); ++n) {
    const double d = norm[n + pad];
    out.samples[n] = d > 1e-12 ? acc[n + pad] / d : 0.0;
  }
  return out;
}

Spectrogram magnitude(const ComplexSpectrogram& spec) {
  Spectrogram out = make_spectrogram(spec, spec.bins, SpectrogramKind::kLinearMagnitude);
  for (std::size_t i = 0; i < spec.values.size(); ++i) out.values.values[i] = std::abs(spec.values[i]);
  return out;
}

Spectrogram log_magnitude(const ComplexSpectrogram& spec) {
  Spectrogram out = make_spectrogram(spec, spec.bins, SpectrogramKind::kLogMagnitude);
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    out.values.values[i] = std::log(std::abs(spec.values[i]) + kLogFloor);
  }
  return out;
}

Spectrogram linear_from_log_magnitude(const Spectrogram& spec) {
  if (spec.kind != SpectrogramKind::kLogMagnitude) {
    fail(ErrorCode::kInvalidParameter, "expected a log_magnitude spectrogram");
  }
  Spectrogram out = spec;
  out.kind = SpectrogramKind::kLinearMagnitude;
  for (auto& v : out.values.values) v = std::max(std::exp(v) - kLogFloor, 0.0);
  return out;
}

Signal magnitude_view(const Spectrogram& spec) {
  if (spec.kind == SpectrogramKind::kLogMagnitude) return linear_from_log_magnitude(spec).values;
  Signal out = spec.values;
  if (spec.kind == SpectrogramKind::kLogMel) {
    for (auto& v : out.values) v = std::exp(v);
  }
  return out;
}

std::vector<std::vector<double>> mel_filterbank(std::size_t n_mels, std::size_t fft_size,
                                                double sample_rate, bool area_normalize) {
  if (n_mels < 1) fail(ErrorCode::kInvalidParameter, "n_mels must be >= 1");
  if (fft_size < 2 || !(sample_rate > 0)) {
    fail(ErrorCode::kInvalidParameter, "filterbank needs fft_size >= 2 and a positive rate");
  }
  const std::size_t bins = fft_size / 2 + 1;
  const double top = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t m = 0; m < edges.size(); ++m) {
    edges[m] = mel_to_hz(top * static_cast<double>(m) / static_cast<double>(n_mels + 1));
  }
  std::vector<std::vector<double>> fb(n_mels, std::vector<double>(bins, 0.0));
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m];
    const double centre = edges[m + 1];
    const double hi = edges[m + 2];
    const double gain = area_normalize ? 2.0 / (hi - lo) : 1.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
      double v = 0.0;
      if (f > lo && f <= centre) {
        v = (f - lo) / (centre - lo);
      } else if (f > centre && f < hi) {
        v = (hi - f) / (hi - centre);
      }
      fb[m][k] = v * gain;
    }
  }
  return fb;
}

Spectrogram log_mel(const ComplexSpectrogram& spec, std::size_t n_mels) {
  const auto fb = mel_filterbank(n_mels, spec.params.fft_size, spec.params.sample_rate);
  Spectrogram out = make_spectrogram(spec, n_mels, SpectrogramKind::kLogMel);
  std::vector<double> power(spec.bins);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t k = 0; k < spec.bins; ++k) power[k] = std::norm(spec.at(t, k));
    for (std::size_t m = 0; m < n_mels; ++m) {
      double acc = 0.0;
      for (std::size_t k = 0; k < spec.bins; ++k) acc += fb[m][k] * power[k];
      out.values.at(t, m) = std::log(acc + kLogFloor);
    }
  }
  return out;
}

Signal scale_to_byte_range(const Signal& values, ScaleRecord* record) {
  if (values.values.empty()) fail(ErrorCode::kDegenerateRange, "empty input");
  const auto [lo_it, hi_it] = std::minmax_element(values.values.begin(), values.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo) || !std::isfinite(hi - lo)) {
    fail(ErrorCode::kDegenerateRange, "cannot scale a constant or non-finite range");
  }
  Signal out = values;
  const double span = hi - lo;
  for (auto& v : out.values) v = (v - lo) / span * 255.0;
  if (record) *record = {lo, hi};
  return out;
}

ByteScaled scale_to_byte_range(const Spectrogram& spec) {
  ByteScaled out;
  out.spectrogram = spec;
  out.spectrogram.values = scale_to_byte_range(spec.values, &out.record);
  return out;
}

Spectrogram unscale_from_byte_range(const Spectrogram& scaled, const ScaleRecord& record) {
  Spectrogram out = scaled;
  const double span = record.max - record.min;
  for (auto& v : out.values.values) v = v / 255.0 * span + record.min;
  return out;
}

std::vector<std::uint8_t> spectrogram_pixels(const Spectrogram& spec) {
  const std::size_t t_count = spec.frames();
  const std::size_t f_count = spec.channels();
  std::vector<std::uint8_t> pixels(t_count * f_count, 128);
  const auto& v = spec.values.values;
  if (v.empty()) return pixels;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  if (!(*hi_it > *lo_it)) return pixels;
  const Signal scaled = scale_to_byte_range(spec.values, nullptr);
  for (std::size_t r = 0; r < f_count; ++r) {
    const std::size_t f = f_count - 1 - r;
    for (std::size_t t = 0; t < t_count; ++t) {
      const double s = std::clamp(std::round(scaled.at(t, f)), 0.0, 255.0);
      pixels[r * t_count + t] = static_cast<std::uint8_t>(s);
    }
  }
  return pixels;
}

void export_spectrogram_image(const Spectrogram& spec, const std::string& path) {
  const auto pixels = spectrogram_pixels(spec);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write image '" + path + "'");
  out << "P5\n" << spec.frames() << ' ' << spec.channels() << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace ksc
