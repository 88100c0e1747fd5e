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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <tuple>

#include "ksc/attacks.hpp"
#include "ksc/error.hpp"
#include "ksc/metrics.hpp"

namespace ksc {
namespace {

ComplexSpectrogram with_phase_of(const Spectrogram& target, const ComplexSpectrogram& phase) {
  ComplexSpectrogram out = phase;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double mag = target.values.values[i];
    const double a = std::abs(phase.values[i]);
    out.values[i] = a > 0.0 ? phase.values[i] * (mag / a) : std::complex<double>(mag, 0.0);
  }
  return out;
}

ComplexSpectrogram zero_phase(const Spectrogram& s) {
  ComplexSpectrogram out;
  out.frames = s.frames();
  out.bins = s.channels();
  out.params = s.params;
  out.values.resize(s.values.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = {s.values.values[i], 0.0};
  return out;
}

Waveform griffin_lim(const Spectrogram& s, std::size_t iterations, std::vector<double>* trace) {
  ComplexSpectrogram estimate = zero_phase(s);
  Waveform x;
  for (std::size_t it = 0; it < iterations; ++it) {
    x = istft(estimate);
    const ComplexSpectrogram c = stft(x, s.params);
    if (trace) trace->push_back(spectral_convergence(c, s));
    estimate = with_phase_of(s, c);
  }
  return x;
}

Waveform pghi(const Spectrogram& s, const PhaseReconConfig& cfg) {
  const std::size_t frames = s.frames();
  const std::size_t bins = s.channels();
  const double n = s.params.fft_size;
  const double h = s.params.hop;
  const double len = s.params.window_length;
  const double lambda = kHannGaussianFit * len * len;
  const double centre = std::floor(len / 2.0);
  const auto& mag = s.values;

  std::vector<double> logs(frames * bins);
  double peak = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    logs[i] = std::log(mag.values[i] + 1e-300);
    peak = std::max(peak, mag.values[i]);
  }
  auto idx = [bins](std::size_t t, std::size_t k) { return t * bins + k; };
  auto d_time = [&](std::size_t t, std::size_t k) {
    if (frames < 2) return 0.0;
    if (t == 0) return logs[idx(1, k)] - logs[idx(0, k)];
    if (t + 1 == frames) return logs[idx(t, k)] - logs[idx(t - 1, k)];
    return (logs[idx(t + 1, k)] - logs[idx(t - 1, k)]) / 2.0;
  };
  auto d_freq = [&](std::size_t t, std::size_t k) {
    if (bins < 2) return 0.0;
    if (k == 0) return logs[idx(t, 1)] - logs[idx(t, 0)];
    if (k + 1 == bins) return logs[idx(t, k)] - logs[idx(t, k - 1)];
    return (logs[idx(t, k + 1)] - logs[idx(t, k - 1)]) / 2.0;
  };
  std::vector<double> grad_freq(frames * bins);
  std::vector<double> grad_time(frames * bins);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k < bins; ++k) {
      grad_freq[idx(t, k)] =
          -lambda / (n * h) * d_time(t, k) - 2.0 * std::numbers::pi * centre / n;
      grad_time[idx(t, k)] = 2.0 * std::numbers::pi * h * static_cast<double>(k) / n +
                             n * h / lambda * d_freq(t, k);
    }
  }

  std::vector<double> phase(frames * bins, 0.0);
  std::vector<std::uint8_t> pending(frames * bins, 0);
  SplitMix64 rng(cfg.seed);
  const double threshold = cfg.relative_threshold * peak;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < phase.size(); ++i) {
    const double u = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
    if (peak > 0.0 && mag.values[i] > threshold) {
      pending[i] = 1;
      order.push_back(i);
    } else {
      phase[i] = 2.0 * std::numbers::pi * u;
    }
  }
  // Seeds for disconnected regions are taken loudest first.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mag.values[a] > mag.values[b]; });

  using Entry = std::pair<double, std::size_t>;
  auto cmp = [](const Entry& a, const Entry& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  std::size_t next_seed = 0;
  while (true) {
    if (heap.empty()) {
      while (next_seed < order.size() && !pending[order[next_seed]]) ++next_seed;
      if (next_seed == order.size()) break;
      const std::size_t s0 = order[next_seed];
      pending[s0] = 0;
      phase[s0] = 0.0;
      heap.emplace(mag.values[s0], s0);
    }
    const std::size_t cur = heap.top().second;
    heap.pop();
    const std::size_t t = cur / bins;
    const std::size_t k = cur % bins;
    auto visit = [&](std::size_t nb, double step) {
      if (!pending[nb]) return;
      pending[nb] = 0;
      phase[nb] = phase[cur] + step;
      heap.emplace(mag.values[nb], nb);
    };
    if (t + 1 < frames) visit(idx(t + 1, k), (grad_time[cur] + grad_time[idx(t + 1, k)]) / 2.0);
    if (t > 0) visit(idx(t - 1, k), -(grad_time[cur] + grad_time[idx(t - 1, k)]) / 2.0);
    if (k + 1 < bins) visit(idx(t, k + 1), (grad_freq[cur] + grad_freq[idx(t, k + 1)]) / 2.0);
    if (k > 0) visit(idx(t, k - 1), -(grad_freq[cur] + grad_freq[idx(t, k - 1)]) / 2.0);
  }

  ComplexSpectrogram c = zero_phase(s);
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    c.values[i] = std::polar(mag.values[i], phase[i]);
  }
  return istft(c);
}

}  // namespace

std::string_view to_string(PhaseMethod method) {
  return method == PhaseMethod::kGriffinLim ? "griffin_lim" : "pghi";
}

PhaseMethod parse_phase_method(std::string_view text) {
  if (text == "griffin_lim" || text == "gl") return PhaseMethod::kGriffinLim;
  if (text == "pghi") return PhaseMethod::kPghi;
  fail(ErrorCode::kParse, "method: expected griffin_lim or pghi, got '" + std::string(text) + "'");
}

void PhaseReconConfig::validate() const {
  if (iterations < 1) fail(ErrorCode::kInvalidParameter, "iterations must be >= 1");
  if (!(relative_threshold > 0.0 && relative_threshold < 1.0)) {
    fail(ErrorCode::kInvalidParameter, "relative_threshold must lie in (0, 1)");
  }
}

double spectral_convergence(const ComplexSpectrogram& estimate, const Spectrogram& target) {
  if (estimate.frames != target.frames() || estimate.bins != target.channels()) {
    fail(ErrorCode::kShapeMismatch, "spectral_convergence: shapes differ");
  }
  const std::size_t bins = estimate.bins;
  const std::size_t nyquist = estimate.params.fft_size / 2;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < estimate.values.size(); ++i) {
    const std::size_t k = i % bins;
    const double weight = (k == 0 || (k == nyquist && estimate.params.fft_size % 2 == 0)) ? 1.0 : 2.0;
    const double s = target.values.values[i];
    const double e = std::abs(estimate.values[i]) - s;
    num += weight * e * e;
    den += weight * s * s;
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

Waveform phase_reconstruct(const Spectrogram& magnitude, const PhaseReconConfig& cfg,
                           std::vector<double>* trace) {
  cfg.validate();
  if (magnitude.kind != SpectrogramKind::kLinearMagnitude) {
    fail(ErrorCode::kInvalidParameter, "phase reconstruction needs a linear_magnitude "
                                       "spectrogram, got " +
                                           std::string(to_string(magnitude.kind)));
  }
  magnitude.params.validate();
  if (magnitude.channels() != magnitude.params.bins() || magnitude.frames() == 0) {
    fail(ErrorCode::kInvalidParameter, "spectrogram width does not match its STFT parameters");
  }
  if (cfg.method == PhaseMethod::kGriffinLim) return griffin_lim(magnitude, cfg.iterations, trace);
  return pghi(magnitude, cfg);
}

ReconstructionMetrics evaluate_reconstruction(const Waveform& original,
                                              const Waveform& reconstructed,
                                              const StftParams& params) {
  if (original.sample_rate != reconstructed.sample_rate) {
    fail(ErrorCode::kInvalidParameter, "sample rates differ: " +
                                           std::to_string(original.sample_rate) + " vs " +
                                           std::to_string(reconstructed.sample_rate));
  }
  const std::size_t n = std::min(original.samples.size(), reconstructed.samples.size());
  Waveform a{{original.samples.begin(), original.samples.begin() + n}, original.sample_rate};
  Waveform b{{reconstructed.samples.begin(), reconstructed.samples.begin() + n},
             original.sample_rate};
  ReconstructionMetrics m;
  m.lsd_db = lsd_db(magnitude(stft(a, params)).values, magnitude(stft(b, params)).values);
  try {
    m.snr_db = snr_db(a.samples, b.samples);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefinedReference) throw;
  }
  return m;
}

}  // namespace ksc
