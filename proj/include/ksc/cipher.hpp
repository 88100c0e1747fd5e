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

#include <string>

#include "ksc/blocking.hpp"
#include "ksc/keys.hpp"
#include "ksc/signal.hpp"

namespace ksc {

struct EncryptedSignal {
  Signal data;
  CipherKind cipher = CipherKind::kShuffle;
  BlockSpec spec;
  std::string key_fingerprint;
};

// Output block value at position i is the input block value at K_s(i).
// Cells outside the block tiling are copied through untouched.
EncryptedSignal shuffle_encrypt(const Signal& x, const ShuffleKey& key,
                                const BlockSpec& spec);
Signal shuffle_decrypt(const EncryptedSignal& y, const ShuffleKey& key);

// Output block value at position i is -x when K_f(i) = 1, x otherwise.
EncryptedSignal flip_encrypt(const Signal& x, const FlipKey& key,
                             const BlockSpec& spec);
// Flipping is an involution; this is flip_encrypt on the carried data.
Signal flip_decrypt(const EncryptedSignal& y, const FlipKey& key);

EncryptedSignal encrypt(const Signal& x, const Key& key, const BlockSpec& spec);
Signal decrypt(const EncryptedSignal& y, const Key& key);

// Block spec matching a key: same mode and block size.
BlockSpec spec_for(const Key& key, RemainderPolicy remainder);

}  // namespace ksc
