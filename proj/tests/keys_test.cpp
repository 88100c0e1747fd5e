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
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "ksc/error.hpp"

namespace ksc {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected ksc::Error";
  return ErrorCode::kStructural;
}

TEST(SplitMix64, MatchesPublishedReferenceStream) {
  // First outputs for seed 1234567 from the reference splitmix64.c.
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng.next(), 6457827717110365317ULL);
  EXPECT_EQ(rng.next(), 3203168211198807973ULL);
  EXPECT_EQ(rng.next(), 9817491932198370423ULL);
}

TEST(GenerateShuffleKey, SingleElementKey) {
  for (std::uint64_t s : {0ULL, 1ULL, 99ULL}) {
    EXPECT_EQ(generate_shuffle_key({s}, Mode::k2d, 1).indices(), std::vector<std::uint32_t>{1});
  }
}

TEST(GenerateShuffleKey, DeterministicPerSeed) {
  const auto a = generate_shuffle_key({42}, Mode::k2d, 2);
  const auto b = generate_shuffle_key({42}, Mode::k2d, 2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 4u);
  EXPECT_NE(generate_shuffle_key({42}, Mode::k2d, 8), generate_shuffle_key({43}, Mode::k2d, 8));
}

TEST(GenerateShuffleKey, EveryKeyIsABijection) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    for (std::size_t m : {1u, 2u, 3u, 5u, 10u}) {
      for (Mode mode : {Mode::k1d, Mode::k2d}) {
        const auto key = generate_shuffle_key({s}, mode, m);
        ASSERT_EQ(key.size(), key_length(mode, m));
        std::vector<int> count(key.size() + 1, 0);
        for (auto v : key.indices()) count[v]++;
        EXPECT_EQ(count[0], 0);
        for (std::size_t v = 1; v <= key.size(); ++v) EXPECT_EQ(count[v], 1);
      }
    }
  }
}

TEST(GenerateShuffleKey, UniformOverSymmetricGroupOfFour) {
  // Enumerate S4 independently and count how often each permutation appears.
  std::vector<std::uint32_t> perm = {1, 2, 3, 4};
  std::map<std::vector<std::uint32_t>, int> counts;
  do {
    counts[perm] = 0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  ASSERT_EQ(counts.size(), 24u);

  const int trials = 10000;
  for (int s = 0; s < trials; ++s) {
    counts.at(generate_shuffle_key({static_cast<std::uint64_t>(s)}, Mode::k2d, 2).indices())++;
  }
  double chi2 = 0.0;
  const double expected = trials / 24.0;
  for (const auto& [p, c] : counts) {
    EXPECT_NEAR(static_cast<double>(c) / trials, 1.0 / 24.0, 0.02);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  // 23 degrees of freedom, 0.999 quantile is 49.7.
  EXPECT_LT(chi2, 49.7);
}

TEST(GenerateFlipKey, LengthsAndDeterminism) {
  const auto k = generate_flip_key({5}, Mode::k1d, 10);
  EXPECT_EQ(k.size(), 10u);
  EXPECT_EQ(k, generate_flip_key({5}, Mode::k1d, 10));
  EXPECT_EQ(generate_flip_key({5}, Mode::k2d, 3).size(), 9u);
}

TEST(GenerateFlipKey, BitsAreBalancedPerPosition) {
  std::vector<int> ones(9, 0);
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) {
    const auto k = generate_flip_key({static_cast<std::uint64_t>(s)}, Mode::k2d, 3);
    for (std::size_t i = 0; i < 9; ++i) ones[i] += k.bits()[i];
  }
  for (int c : ones) EXPECT_NEAR(static_cast<double>(c) / trials, 0.5, 0.02);
}

TEST(GenerateKey, ZeroBlockSizeIsRejected) {
  EXPECT_EQ(code_of([] { generate_shuffle_key({1}, Mode::k2d, 0); }), ErrorCode::kInvalidParameter);
  EXPECT_EQ(code_of([] { generate_flip_key({1}, Mode::k1d, 0); }), ErrorCode::kInvalidParameter);
}

TEST(InvertShuffleKey, Examples) {
  EXPECT_EQ(invert_shuffle_key(ShuffleKey::identity(Mode::k2d, 3)), ShuffleKey::identity(Mode::k2d, 3));
  const ShuffleKey k(Mode::k2d, 2, {3, 1, 4, 2});
  EXPECT_EQ(invert_shuffle_key(k).indices(), (std::vector<std::uint32_t>{2, 4, 1, 3}));
}

TEST(InvertShuffleKey, InverseProperties) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto k = generate_shuffle_key({s}, s % 2 ? Mode::k1d : Mode::k2d, 1 + s % 7);
    const auto inv = invert_shuffle_key(k);
    EXPECT_EQ(invert_shuffle_key(inv), k);
    for (std::size_t i = 1; i <= k.size(); ++i) EXPECT_EQ(inv(k(i)), i);
  }
}

// Counts keys by brute force: permutations via next_permutation, bit keys
// via all binary strings.
std::size_t enumerate_keys(CipherKind cipher, std::size_t length) {
  if (cipher == CipherKind::kFlip) {
    std::set<std::vector<int>> seen;
    for (std::size_t code = 0; code < (std::size_t{1} << length); ++code) {
      std::vector<int> bits(length);
      for (std::size_t i = 0; i < length; ++i) bits[i] = (code >> i) & 1;
      seen.insert(bits);
    }
    return seen.size();
  }
  std::vector<int> p(length);
  std::iota(p.begin(), p.end(), 1);
  std::size_t n = 0;
  do {
    ++n;
  } while (std::next_permutation(p.begin(), p.end()));
  return n;
}

TEST(KeySpaceSize, Examples) {
  EXPECT_EQ(key_space_size(CipherKind::kShuffle, Mode::k2d, 3), 362880);
  EXPECT_EQ(key_space_size(CipherKind::kFlip, Mode::k2d, 3), 512);
  EXPECT_EQ(key_space_size(CipherKind::kFlip, Mode::k1d, 10), 1024);
  EXPECT_EQ(key_space_size(CipherKind::kShuffle, Mode::k1d, 10), 3628800);
}

TEST(KeySpaceSize, MatchesEnumeration) {
  for (CipherKind c : {CipherKind::kShuffle, CipherKind::kFlip}) {
    for (std::size_t m = 1; m <= 2; ++m) {
      EXPECT_EQ(key_space_size(c, Mode::k2d, m), enumerate_keys(c, m * m));
    }
    for (std::size_t m = 1; m <= 5; ++m) {
      EXPECT_EQ(key_space_size(c, Mode::k1d, m), enumerate_keys(c, m));
    }
  }
}

TEST(KeySpaceSize, IsExactForLargeBlocks) {
  // 10^2! has 158 decimal digits.
  const auto big = key_space_size(CipherKind::kShuffle, Mode::k2d, 10);
  EXPECT_EQ(big.str().size(), 158u);
  EXPECT_EQ(key_space_size(CipherKind::kFlip, Mode::k2d, 10).str(),
            "1267650600228229401496703205376");
}

TEST(KeyFile, SerializedLayout) {
  const Key k = ShuffleKey(Mode::k2d, 2, {3, 1, 4, 2});
  EXPECT_EQ(serialize_key(k), "KSC1\ncipher=shuffle\nmode=2d\nM=2\n3 1 4 2\n");
  const Key f = FlipKey(Mode::k1d, 3, {1, 0, 1});
  EXPECT_EQ(serialize_key(f), "KSC1\ncipher=flip\nmode=1d\nM=3\n1 0 1\n");
}

TEST(KeyFile, RoundTripProperty) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Mode mode = s % 2 ? Mode::k1d : Mode::k2d;
    const std::size_t m = 1 + s % 10;
    const Key a = generate_shuffle_key({s}, mode, m);
    const Key b = generate_flip_key({s}, mode, m);
    EXPECT_EQ(parse_key(serialize_key(a)), a);
    EXPECT_EQ(parse_key(serialize_key(b)), b);
  }
}

TEST(KeyFile, ParseErrorsNameTheField) {
  auto message = [](std::string_view text) {
    try {
      parse_key(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse);
      return std::string(e.what());
    }
    ADD_FAILURE() << "parse accepted: " << text;
    return std::string();
  };
  EXPECT_NE(message("KSC1\ncipher=shuffle\nmode=2d\nM=2\n1 1 2 3\n").find("bijection"),
            std::string::npos);
  EXPECT_NE(message("KSC1\ncipher=flip\nmode=2d\nM=2\n0 1 2 0\n").find("invalid bit"),
            std::string::npos);
  EXPECT_NE(message("KSC1\ncipher=flip\nmode=2d\nM=2\n0 1 1 0").find("newline"), std::string::npos);
  EXPECT_NE(message("KSC2\ncipher=flip\nmode=2d\nM=2\n0 1 1 0\n").find("magic"), std::string::npos);
  EXPECT_NE(message("KSC1\ncipher=rot13\nmode=2d\nM=2\n0 1 1 0\n").find("cipher"), std::string::npos);
  EXPECT_NE(message("KSC1\ncipher=flip\nmode=3d\nM=2\n0 1 1 0\n").find("mode"), std::string::npos);
  EXPECT_NE(message("KSC1\ncipher=flip\nmode=2d\nM=x\n0 1 1 0\n").find("M"), std::string::npos);
  EXPECT_NE(message("KSC1\ncipher=flip\nmode=2d\nM=2\n0 1 1\n").find("payload"), std::string::npos);
  // Whitespace variants are rejected.
  message("KSC1\r\ncipher=flip\nmode=2d\nM=2\n0 1 1 0\n");
  message("KSC1\ncipher=flip\nmode=2d\nM=2\n0  1 1 0\n");
  message("KSC1\ncipher=flip\nmode=2d\nM=2\n0 1 1 0 \n");
  message("KSC1\ncipher = flip\nmode=2d\nM=2\n0 1 1 0\n");
}

TEST(KeyFingerprint, StableAndKeySensitive) {
  const Key a = ShuffleKey(Mode::k2d, 2, {3, 1, 4, 2});
  const Key b = ShuffleKey(Mode::k2d, 2, {3, 1, 2, 4});
  EXPECT_EQ(key_fingerprint(a).size(), 16u);
  EXPECT_EQ(key_fingerprint(a), key_fingerprint(a));
  EXPECT_NE(key_fingerprint(a), key_fingerprint(b));
}

}  // namespace
}  // namespace ksc
