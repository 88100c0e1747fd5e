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

#include <cstdint>

#include "ksc/dsp.hpp"

namespace ksc {

// Deterministic speech-like test utterance: voiced segments (band-limited
// glottal harmonics with a drifting pitch contour shaped by three formant
// resonators), fricatives (resonant noise) and short pauses over a faint
// noise floor. Peak amplitude 0.5.
Waveform synthesize_speech(std::uint64_t seed, double duration_seconds = 2.0,
                           std::uint32_t sample_rate = 16000);

}  // namespace ksc
