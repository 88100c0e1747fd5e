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

#include "ksc/presets.hpp"

#include "ksc/error.hpp"

namespace ksc {

Preset preset_asr3() {
  return {"asr3", Mode::k2d, 3, SpectrogramKind::kLogMel, 80};
}

Preset preset_asv10() { return {"asv10", Mode::k1d, 10, std::nullopt, 0}; }

std::optional<Preset> find_preset(std::string_view name) {
  if (name == "asr3") return preset_asr3();
  if (name == "asv10") return preset_asv10();
  if (name == "none" || name.empty()) return std::nullopt;
  fail(ErrorCode::kParse, "preset: expected asr3, asv10 or none, got '" + std::string(name) + "'");
}

}  // namespace ksc
