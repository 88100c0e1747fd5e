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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ksc/signal.hpp"

namespace ksc {

// splitmix64 (Steele, Lea, Flood 2014). The exact output stream is part of
// the key file contract: keys derived from the same seed must be identical on
// every platform and in every language binding.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) by rejection: draws r are discarded while
  // r < (2^64 - bound) mod bound, then r mod bound is returned.
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

struct KeySeed {
  std::uint64_t seed = 0;
};

// Number of key entries: M*M in 2d mode, M in 1d mode.
std::size_t key_length(Mode mode, std::size_t block_size);

// Secret permutation K_s. Stored 1-based: indices()[i-1] = K_s(i).
class ShuffleKey {
 public:
  // Throws kInvalidParameter / kParse when the indices are not a bijection
  // on {1..L} or L does not match mode and block size.
  ShuffleKey(Mode mode, std::size_t block_size,
             std::vector<std::uint32_t> indices);

  static ShuffleKey identity(Mode mode, std::size_t block_size);

  Mode mode() const { return mode_; }
  std::size_t block_size() const { return block_size_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<std::uint32_t>& indices() const { return indices_; }
  // 1-based lookup, K_s(i).
  std::uint32_t operator()(std::size_t i) const { return indices_[i - 1]; }
  bool is_identity() const;

  friend bool operator==(const ShuffleKey&, const ShuffleKey&) = default;

 private:
  Mode mode_;
  std::size_t block_size_;
  std::vector<std::uint32_t> indices_;
};

// Secret bit sequence K_f; bit 1 negates the value at that block position.
class FlipKey {
 public:
  FlipKey(Mode mode, std::size_t block_size, std::vector<std::uint8_t> bits);

  static FlipKey zeros(Mode mode, std::size_t block_size);

  Mode mode() const { return mode_; }
  std::size_t block_size() const { return block_size_; }
  std::size_t size() const { return bits_.size(); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  // 1-based lookup, K_f(i).
  bool operator()(std::size_t i) const { return bits_[i - 1] != 0; }

  friend bool operator==(const FlipKey&, const FlipKey&) = default;

 private:
  Mode mode_;
  std::size_t block_size_;
  std::vector<std::uint8_t> bits_;
};

using Key = std::variant<ShuffleKey, FlipKey>;

CipherKind cipher_of(const Key& key);
Mode mode_of(const Key& key);
std::size_t block_size_of(const Key& key);

// Fisher-Yates over the splitmix64 stream: starting from the identity
// [1..L], for i = L-1 down to 1 swap positions i and uniform_below(i+1).
ShuffleKey generate_shuffle_key(KeySeed seed, Mode mode, std::size_t block_size);

// Bit l is the lowest bit of the l-th splitmix64 output.
FlipKey generate_flip_key(KeySeed seed, Mode mode, std::size_t block_size);

Key generate_key(CipherKind cipher, KeySeed seed, Mode mode,
                 std::size_t block_size);

ShuffleKey invert_shuffle_key(const ShuffleKey& key);

// (M^2)!, 2^(M^2), M! or 2^M.
boost::multiprecision::cpp_int key_space_size(CipherKind cipher, Mode mode,
                                              std::size_t block_size);

// Key file text:
//   KSC1\ncipher=<shuffle|flip>\nmode=<1d|2d>\nM=<int>\n<payload>\n
std::string serialize_key(const Key& key);
Key parse_key(std::string_view text);

// 16 hex digits of FNV-1a/64 over the serialized key.
std::string key_fingerprint(const Key& key);

Key read_key_file(const std::string& path);
void write_key_file(const Key& key, const std::string& path);

}  // namespace ksc
