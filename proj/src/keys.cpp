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

#include "ksc/keys.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "ksc/error.hpp"

namespace ksc {
namespace {

void check_block_size(std::size_t block_size) {
  if (block_size == 0) {
    fail(ErrorCode::kInvalidParameter, "block size M must be >= 1");
  }
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::uint64_t parse_uint(std::string_view token, const char* field) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    fail(ErrorCode::kParse, std::string(field) + ": not an unsigned integer: '" +
                                std::string(token) + "'");
  }
  return value;
}

std::string_view expect_field(std::string_view line, std::string_view name) {
  if (line.size() <= name.size() || line.substr(0, name.size()) != name ||
      line[name.size()] != '=') {
    fail(ErrorCode::kParse, std::string(name) + ": expected '" +
                                std::string(name) + "=<value>', got '" +
                                std::string(line) + "'");
  }
  return line.substr(name.size() + 1);
}

}  // namespace

std::uint64_t SplitMix64::uniform_below(std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::size_t key_length(Mode mode, std::size_t block_size) {
  check_block_size(block_size);
  return mode == Mode::k2d ? block_size * block_size : block_size;
}

ShuffleKey::ShuffleKey(Mode mode, std::size_t block_size,
                       std::vector<std::uint32_t> indices)
    : mode_(mode), block_size_(block_size), indices_(std::move(indices)) {
  const std::size_t expected = key_length(mode, block_size);
  if (indices_.size() != expected) {
    fail(ErrorCode::kInvalidParameter,
         "shuffle key: expected " + std::to_string(expected) + " indices, got " +
             std::to_string(indices_.size()));
  }
  std::vector<std::uint8_t> seen(expected + 1, 0);
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const std::uint32_t v = indices_[i];
    if (v < 1 || v > expected) {
      fail(ErrorCode::kInvalidParameter,
           "shuffle key: index " + std::to_string(v) + " at position " +
               std::to_string(i + 1) + " outside 1.." + std::to_string(expected));
    }
    if (seen[v]++) {
      fail(ErrorCode::kInvalidParameter,
           "shuffle key: not a bijection, index " + std::to_string(v) +
               " repeated at position " + std::to_string(i + 1));
    }
  }
}

ShuffleKey ShuffleKey::identity(Mode mode, std::size_t block_size) {
  std::vector<std::uint32_t> idx(key_length(mode, block_size));
  std::iota(idx.begin(), idx.end(), 1u);
  return ShuffleKey(mode, block_size, std::move(idx));
}

bool ShuffleKey::is_identity() const {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] != i + 1) return false;
  }
  return true;
}

FlipKey::FlipKey(Mode mode, std::size_t block_size, std::vector<std::uint8_t> bits)
    : mode_(mode), block_size_(block_size), bits_(std::move(bits)) {
  const std::size_t expected = key_length(mode, block_size);
  if (bits_.size() != expected) {
    fail(ErrorCode::kInvalidParameter,
         "flip key: expected " + std::to_string(expected) + " bits, got " +
             std::to_string(bits_.size()));
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] > 1) {
      fail(ErrorCode::kInvalidParameter,
           "flip key: invalid bit " + std::to_string(bits_[i]) + " at position " +
               std::to_string(i + 1));
    }
  }
}

FlipKey FlipKey::zeros(Mode mode, std::size_t block_size) {
  return FlipKey(mode, block_size,
                 std::vector<std::uint8_t>(key_length(mode, block_size), 0));
}

CipherKind cipher_of(const Key& key) {
  return std::holds_alternative<ShuffleKey>(key) ? CipherKind::kShuffle
                                                  : CipherKind::kFlip;
}

Mode mode_of(const Key& key) {
  return std::visit([](const auto& k) { return k.mode(); }, key);
}

std::size_t block_size_of(const Key& key) {
  return std::visit([](const auto& k) { return k.block_size(); }, key);
}

ShuffleKey generate_shuffle_key(KeySeed seed, Mode mode, std::size_t block_size) {
  std::vector<std::uint32_t> idx(key_length(mode, block_size));
  std::iota(idx.begin(), idx.end(), 1u);
  SplitMix64 rng(seed.seed);
  for (std::size_t i = idx.size() - 1; i > 0; --i) {
    const std::size_t j = rng.uniform_below(i + 1);
    std::swap(idx[i], idx[j]);
  }
  return ShuffleKey(mode, block_size, std::move(idx));
}

FlipKey generate_flip_key(KeySeed seed, Mode mode, std::size_t block_size) {
  std::vector<std::uint8_t> bits(key_length(mode, block_size));
  SplitMix64 rng(seed.seed);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next() & 1u);
  return FlipKey(mode, block_size, std::move(bits));
}

Key generate_key(CipherKind cipher, KeySeed seed, Mode mode,
                 std::size_t block_size) {
  if (cipher == CipherKind::kShuffle) {
    return generate_shuffle_key(seed, mode, block_size);
  }
  return generate_flip_key(seed, mode, block_size);
}

ShuffleKey invert_shuffle_key(const ShuffleKey& key) {
  std::vector<std::uint32_t> inv(key.size());
  for (std::size_t i = 1; i <= key.size(); ++i) {
    inv[key(i) - 1] = static_cast<std::uint32_t>(i);
  }
  return ShuffleKey(key.mode(), key.block_size(), std::move(inv));
}

boost::multiprecision::cpp_int key_space_size(CipherKind cipher, Mode mode,
                                              std::size_t block_size) {
  using boost::multiprecision::cpp_int;
  const std::size_t length = key_length(mode, block_size);
  if (cipher == CipherKind::kFlip) {
    cpp_int one = 1;
    return one << length;
  }
  cpp_int result = 1;
  for (std::size_t k = 2; k <= length; ++k) result *= k;
  return result;
}

std::string serialize_key(const Key& key) {
  std::ostringstream out;
  out << "KSC1\n"
      << "cipher=" << to_string(cipher_of(key)) << '\n'
      << "mode=" << to_string(mode_of(key)) << '\n'
      << "M=" << block_size_of(key) << '\n';
  std::visit(
      [&out](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ShuffleKey>) {
          for (std::size_t i = 0; i < k.size(); ++i) {
            out << (i ? " " : "") << k.indices()[i];
          }
        } else {
          for (std::size_t i = 0; i < k.size(); ++i) {
            out << (i ? " " : "") << static_cast<int>(k.bits()[i]);
          }
        }
      },
      key);
  out << '\n';
  return out.str();
}

Key parse_key(std::string_view text) {
  if (text.empty() || text.back() != '\n') {
    fail(ErrorCode::kParse, "key file: missing trailing newline");
  }
  const auto lines = split(text.substr(0, text.size() - 1), '\n');
  if (lines.size() != 5) {
    fail(ErrorCode::kParse, "key file: expected 5 lines, got " +
                                std::to_string(lines.size()));
  }
  if (lines[0] != "KSC1") {
    fail(ErrorCode::kParse, "magic: expected 'KSC1'");
  }
  const CipherKind cipher = parse_cipher(expect_field(lines[1], "cipher"));
  const Mode mode = parse_mode(expect_field(lines[2], "mode"));
  const std::uint64_t m = parse_uint(expect_field(lines[3], "M"), "M");
  if (m == 0 || m > 4096) {
    fail(ErrorCode::kParse, "M: out of range: " + std::to_string(m));
  }
  const std::size_t length = key_length(mode, m);
  const auto tokens = split(lines[4], ' ');
  if (tokens.size() != length) {
    fail(ErrorCode::kParse, "payload: expected " + std::to_string(length) +
                                " entries, got " + std::to_string(tokens.size()));
  }
  try {
    if (cipher == CipherKind::kShuffle) {
      std::vector<std::uint32_t> idx;
      idx.reserve(length);
      for (auto t : tokens) {
        const std::uint64_t v = parse_uint(t, "payload");
        if (v > std::numeric_limits<std::uint32_t>::max()) {
          fail(ErrorCode::kParse, "payload: index out of range");
        }
        idx.push_back(static_cast<std::uint32_t>(v));
      }
      return ShuffleKey(mode, m, std::move(idx));
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(length);
    for (auto t : tokens) {
      if (t != "0" && t != "1") {
        fail(ErrorCode::kParse,
             "payload: invalid bit '" + std::string(t) + "' (expected 0 or 1)");
      }
      bits.push_back(t == "1" ? 1 : 0);
    }
    return FlipKey(mode, m, std::move(bits));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    fail(ErrorCode::kParse, std::string("payload: ") + e.what());
  }
}

std::string key_fingerprint(const Key& key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_key(key)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Key read_key_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open key file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key(buf.str());
}

void write_key_file(const Key& key, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write key file '" + path + "'");
  out << serialize_key(key);
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace ksc
