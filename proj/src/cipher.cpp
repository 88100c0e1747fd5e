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

#include "ksc/cipher.hpp"

#include <string>
#include <vector>

#include "ksc/error.hpp"

namespace ksc {
namespace {

template <typename K>
void check_key(const K& key, const BlockSpec& spec) {
  if (key.mode() != spec.mode || key.block_size() != spec.block_size) {
    fail(ErrorCode::kKeyMismatch,
         "key is (" + std::string(to_string(key.mode())) + ", M=" +
             std::to_string(key.block_size()) + ") but data is blocked as (" +
             std::string(to_string(spec.mode)) +
             ", M=" + std::to_string(spec.block_size) + ")");
  }
}

void check_cipher(const EncryptedSignal& y, CipherKind expected) {
  if (y.cipher != expected) {
    fail(ErrorCode::kWrongCipher,
         "signal was encrypted with " + std::string(to_string(y.cipher)) +
             ", not " + std::string(to_string(expected)));
  }
}

// out(i) = in(source[i] - 1), block by block.
Signal permute_blocks(const Signal& x, const std::vector<std::uint32_t>& source,
                      const BlockSpec& spec) {
  BlockGrid grid = partition(x, spec);
  std::vector<double> scratch(spec.block_length());
  for (std::size_t b = 0; b < grid.block_count(); ++b) {
    auto blk = grid.block(b);
    for (std::size_t i = 0; i < blk.size(); ++i) scratch[i] = blk[source[i] - 1];
    std::copy(scratch.begin(), scratch.end(), blk.begin());
  }
  return assemble(grid);
}

Signal flip_blocks(const Signal& x, const FlipKey& key, const BlockSpec& spec) {
  BlockGrid grid = partition(x, spec);
  const auto& bits = key.bits();
  for (std::size_t b = 0; b < grid.block_count(); ++b) {
    auto blk = grid.block(b);
    for (std::size_t i = 0; i < blk.size(); ++i) {
      if (bits[i]) blk[i] = -blk[i];
    }
  }
  return assemble(grid);
}

}  // namespace

EncryptedSignal shuffle_encrypt(const Signal& x, const ShuffleKey& key,
                                const BlockSpec& spec) {
  check_key(key, spec);
  return {permute_blocks(x, key.indices(), spec), CipherKind::kShuffle, spec,
          key_fingerprint(key)};
}

Signal shuffle_decrypt(const EncryptedSignal& y, const ShuffleKey& key) {
  check_cipher(y, CipherKind::kShuffle);
  check_key(key, y.spec);
  return permute_blocks(y.data, invert_shuffle_key(key).indices(), y.spec);
}

EncryptedSignal flip_encrypt(const Signal& x, const FlipKey& key,
                             const BlockSpec& spec) {
  check_key(key, spec);
  return {flip_blocks(x, key, spec), CipherKind::kFlip, spec, key_fingerprint(key)};
}

Signal flip_decrypt(const EncryptedSignal& y, const FlipKey& key) {
  check_cipher(y, CipherKind::kFlip);
  check_key(key, y.spec);
  return flip_blocks(y.data, key, y.spec);
}

EncryptedSignal encrypt(const Signal& x, const Key& key, const BlockSpec& spec) {
  if (const auto* k = std::get_if<ShuffleKey>(&key)) {
    return shuffle_encrypt(x, *k, spec);
  }
  return flip_encrypt(x, std::get<FlipKey>(key), spec);
}

Signal decrypt(const EncryptedSignal& y, const Key& key) {
  if (const auto* k = std::get_if<ShuffleKey>(&key)) {
    return shuffle_decrypt(y, *k);
  }
  return flip_decrypt(y, std::get<FlipKey>(key));
}

BlockSpec spec_for(const Key& key, RemainderPolicy remainder) {
  return {mode_of(key), block_size_of(key), remainder};
}

}  // namespace ksc
