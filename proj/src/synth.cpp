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

#include "ksc/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ksc/error.hpp"
#include "ksc/keys.hpp"

namespace ksc {
namespace {

struct Vowel {
  double f1, f2, f3;
};

// Rough adult formant targets (Hz) for /a/, /i/, /u/, /e/, /o/, /ae/.
constexpr std::array<Vowel, 6> kVowels = {{
    {730, 1090, 2440},
    {270, 2290, 3010},
    {300, 870, 2240},
    {530, 1840, 2480},
    {570, 840, 2410},
    {660, 1720, 2410},
}};

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double next() { return static_cast<double>(rng_.next() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * next(); }
  double noise() { return 2.0 * next() - 1.0; }

 private:
  SplitMix64 rng_;
};

// Two-pole resonator with unity gain at DC-normalised peak.
class Resonator {
 public:
  void tune(double freq, double bandwidth, double rate) {
    const double r = std::exp(-std::numbers::pi * bandwidth / rate);
    a1_ = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / rate);
    a2_ = -r * r;
    gain_ = 1.0 - r;
  }
  double step(double x) {
    const double y = gain_ * x + a1_ * y1_ + a2_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a1_ = 0.0, a2_ = 0.0, gain_ = 1.0;
  double y1_ = 0.0, y2_ = 0.0;
};

double envelope(std::size_t i, std::size_t len, std::size_t ramp) {
  const double up = std::min(1.0, static_cast<double>(i) / ramp);
  const double down = std::min(1.0, static_cast<double>(len - i) / ramp);
  return std::min(up, down);
}

}  // namespace

Waveform synthesize_speech(std::uint64_t seed, double duration_seconds, std::uint32_t sample_rate) {
  if (!(duration_seconds > 0.0) || sample_rate == 0) {
    fail(ErrorCode::kInvalidParameter, "synthesis needs a positive duration and sample rate");
  }
  const double rate = sample_rate;
  const auto total = static_cast<std::size_t>(duration_seconds * rate);
  Uniform u(seed);
  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.assign(total, 0.0);

  const double base_f0 = u.range(95.0, 210.0);
  double phase = 0.0;
  std::size_t pos = static_cast<std::size_t>(u.range(0.05, 0.15) * rate);
  while (pos < total) {
    const double kind = u.next();
    if (kind < 0.62) {
      // Voiced segment gliding between two vowels.
      const auto len = std::min(total - pos, static_cast<std::size_t>(u.range(0.15, 0.38) * rate));
      const Vowel& a = kVowels[static_cast<std::size_t>(u.next() * kVowels.size()) % kVowels.size()];
      const Vowel& b = kVowels[static_cast<std::size_t>(u.next() * kVowels.size()) % kVowels.size()];
      const double f0_start = base_f0 * u.range(0.9, 1.2);
      const double f0_end = base_f0 * u.range(0.75, 1.05);
      const double level = u.range(0.5, 1.0);
      std::array<Resonator, 3> formants;
      for (std::size_t i = 0; i < len; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(len);
        if (i % 32 == 0) {
          formants[0].tune(a.f1 + (b.f1 - a.f1) * x, 80.0, rate);
          formants[1].tune(a.f2 + (b.f2 - a.f2) * x, 110.0, rate);
          formants[2].tune(a.f3 + (b.f3 - a.f3) * x, 160.0, rate);
        }
        const double f0 = (f0_start + (f0_end - f0_start) * x) *
                          (1.0 + 0.01 * std::sin(2.0 * std::numbers::pi * 5.0 * i / rate));
        phase += 2.0 * std::numbers::pi * f0 / rate;
        const int harmonics = static_cast<int>(0.45 * rate / f0);
        double src = 0.0;
        for (int h = 1; h <= harmonics; ++h) src += std::sin(h * phase) / h;
        const double v = formants[0].step(src) * 1.0 + formants[1].step(src) * 0.6 +
                         formants[2].step(src) * 0.35;
        out.samples[pos + i] += level * envelope(i, len, sample_rate / 50) * v;
      }
      pos += len;
    } else if (kind < 0.82) {
      // Fricative.
      const auto len = std::min(total - pos, static_cast<std::size_t>(u.range(0.06, 0.14) * rate));
      Resonator hiss;
      hiss.tune(u.range(2500.0, 0.42 * rate), 900.0, rate);
      const double level = u.range(0.15, 0.35);
      for (std::size_t i = 0; i < len; ++i) {
        out.samples[pos + i] += level * envelope(i, len, sample_rate / 100) * hiss.step(u.noise()) * 4.0;
      }
      pos += len;
    } else {
      pos += static_cast<std::size_t>(u.range(0.04, 0.15) * rate);
    }
  }

  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  const double gain = peak > 0.0 ? 0.5 / peak : 1.0;
  for (auto& v : out.samples) v = v * gain + 1e-4 * u.noise();
  return out;
}

}  // namespace ksc
