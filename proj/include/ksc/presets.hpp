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
#include <optional>
#include <string>
#include <string_view>

#include "ksc/dsp.hpp"
#include "ksc/signal.hpp"

namespace ksc {

// Named experiment configurations.
//   asr3:  80-dim log-mel frames, 2d blocks and patches of 3 x 3.
//   asv10: raw waveform, 1d blocks and patches of 10 samples.
struct Preset {
  std::string name;
  Mode mode = Mode::k2d;
  std::size_t block_size = 1;
  std::optional<SpectrogramKind> feature;  // absent: waveform input
  std::size_t n_mels = 0;
};

Preset preset_asr3();
Preset preset_asv10();
// "asr3", "asv10"; "none" yields std::nullopt. Throws kParse otherwise.
std::optional<Preset> find_preset(std::string_view name);

}  // namespace ksc
