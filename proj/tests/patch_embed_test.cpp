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

#include "ksc/patch_embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "ksc/cipher.hpp"
#include "ksc/error.hpp"
#include "support/test_support.hpp"

namespace ksc {
namespace {

using testing::TestRng;

PatchEmbedKernel flat_kernel(std::vector<double> w) {
  PatchEmbedKernel k;
  k.mode = Mode::k2d;
  k.patch = 2;
  k.dim = 1;
  k.weights = std::move(w);
  return k;
}

// Relative Frobenius distance per output channel, worst channel.
double max_rel(const Embedding& a, const Embedding& b) { return embedding_distance(a, b).max_rel; }

TEST(Embed, ZeroKernelGivesZeroEmbedding) {
  TestRng rng(20);
  PatchEmbedKernel k{Mode::k2d, 3, 4, std::vector<double>(36, 0.0)};
  const auto e = embed(testing::random_matrix(rng, 9, 12), k);
  EXPECT_EQ(e.rows, 3u);
  EXPECT_EQ(e.cols, 4u);
  for (double v : e.values) EXPECT_EQ(v, 0.0);
}

TEST(Embed, SingleDotProduct) {
  const auto x = Signal::matrix(2, 2, {10, 20, 30, 40});
  const auto k = flat_kernel({1, 2, 3, 4});
  EXPECT_EQ(embed(x, k).values, std::vector<double>{300});
  EXPECT_EQ(testing::naive_embed(x, k).values, std::vector<double>{300});
}

TEST(Embed, MatchesNaiveOracle) {
  TestRng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Mode mode = trial % 2 ? Mode::k1d : Mode::k2d;
    const std::size_t p = 1 + rng.below(8);
    const std::size_t d = 1 + rng.below(16);
    const auto k = random_kernel(rng.next(), mode, p, d);
    const Signal x = mode == Mode::k2d
                         ? testing::random_matrix(rng, p * (1 + rng.below(6)), p * (1 + rng.below(6)))
                         : testing::random_sequence(rng, p * (1 + rng.below(30)));
    EXPECT_EQ(embed(x, k), testing::naive_embed(x, k));
  }
}

TEST(Embed, PassthroughIgnoresTrailingCells) {
  TestRng rng(22);
  const auto k = random_kernel(3, Mode::k2d, 3, 5);
  const auto x = testing::random_matrix(rng, 80, 100);
  const auto e = embed(x, k, RemainderPolicy::kPassthrough);
  EXPECT_EQ(e.rows, 26u);
  EXPECT_EQ(e.cols, 33u);
  EXPECT_EQ(e, testing::naive_embed(x, k));
  EXPECT_THROW(embed(x, k), Error);
}

TEST(RandomKernel, DeterministicAndInRange) {
  const auto a = random_kernel(9, Mode::k1d, 10, 8);
  EXPECT_EQ(a, random_kernel(9, Mode::k1d, 10, 8));
  EXPECT_EQ(a.weights.size(), 80u);
  for (double w : a.weights) {
    EXPECT_GE(w, -1.0);
    EXPECT_LT(w, 1.0);
  }
}

TEST(TransformKernelShuffle, Examples) {
  const auto k = flat_kernel({1, 2, 3, 4});
  EXPECT_EQ(transform_kernel_shuffle(k, ShuffleKey::identity(Mode::k2d, 2)), k);
  const ShuffleKey key(Mode::k2d, 2, {3, 1, 4, 2});
  const auto t = transform_kernel_shuffle(k, key);
  EXPECT_EQ(t.weights, (std::vector<double>{3, 1, 4, 2}));
  const auto y = shuffle_encrypt(Signal::matrix(2, 2, {10, 20, 30, 40}), key, {Mode::k2d, 2});
  EXPECT_EQ(y.data.values, (std::vector<double>{30, 10, 40, 20}));
  EXPECT_EQ(embed(y.data, t).values, std::vector<double>{300});
}

TEST(TransformKernelShuffle, AgreesWithPermutationMatrixProduct) {
  // E' = S E where S is the permutation matrix with S[i][K(i)-1] = 1.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t p = 1 + seed % 4;
    const std::size_t d = 1 + seed % 5;
    const auto k = random_kernel(seed, Mode::k2d, p, d);
    const auto key = generate_shuffle_key({seed}, Mode::k2d, p);
    const auto s = testing::permutation_matrix(key.indices());
    const auto t = transform_kernel_shuffle(k, key);
    for (std::size_t i = 0; i < p * p; ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < p * p; ++j) acc += s[i][j] * k.at(j, c);
        EXPECT_EQ(t.at(i, c), acc);
      }
    }
  }
}

TEST(TransformKernelShuffle, InverseKeyRestoresKernel) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Mode mode = seed % 2 ? Mode::k1d : Mode::k2d;
    const auto k = random_kernel(seed, mode, 1 + seed % 8, 1 + seed % 16);
    const auto key = generate_shuffle_key({seed}, mode, k.patch);
    EXPECT_EQ(transform_kernel_shuffle(transform_kernel_shuffle(k, key), invert_shuffle_key(key)), k);
  }
}

TEST(TransformKernelShuffle, MismatchedKeyIsRejected) {
  const auto k = random_kernel(1, Mode::k2d, 3, 2);
  EXPECT_THROW(transform_kernel_shuffle(k, ShuffleKey::identity(Mode::k2d, 2)), Error);
  EXPECT_THROW(transform_kernel_shuffle(k, ShuffleKey::identity(Mode::k1d, 3)), Error);
}

TEST(TransformKernelFlip, Examples) {
  const auto k = flat_kernel({1, 2, 3, 4});
  EXPECT_EQ(transform_kernel_flip(k, FlipKey::zeros(Mode::k2d, 2)), k);
  const FlipKey key(Mode::k2d, 2, {1, 0, 0, 1});
  const auto t = transform_kernel_flip(k, key);
  EXPECT_EQ(t.weights, (std::vector<double>{-1, 2, 3, -4}));
  const auto y = flip_encrypt(Signal::matrix(2, 2, {10, 20, 30, 40}), key, {Mode::k2d, 2});
  EXPECT_EQ(y.data.values, (std::vector<double>{-10, 20, 30, -40}));
  EXPECT_EQ(embed(y.data, t).values, std::vector<double>{300});
}

TEST(TransformKernelFlip, IsAnInvolution) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Mode mode = seed % 2 ? Mode::k1d : Mode::k2d;
    const auto k = random_kernel(seed, mode, 1 + seed % 8, 1 + seed % 16);
    const auto key = generate_flip_key({seed}, mode, k.patch);
    EXPECT_EQ(transform_kernel_flip(transform_kernel_flip(k, key), key), k);
  }
}

TEST(Commutation, HoldsForAllShapes) {
  TestRng rng(23);
  for (Mode mode : {Mode::k1d, Mode::k2d}) {
    for (std::size_t p = 1; p <= 8; ++p) {
      for (std::size_t d = 1; d <= 16; ++d) {
        const auto k = random_kernel(rng.next(), mode, p, d);
        const Signal x = mode == Mode::k2d ? testing::random_matrix(rng, 3 * p, 2 * p)
                                           : testing::random_sequence(rng, 5 * p);
        const auto reference = embed(x, k);

        const auto fk = generate_flip_key({rng.next()}, mode, p);
        const auto fy = flip_encrypt(x, fk, {mode, p});
        EXPECT_EQ(embed(fy.data, transform_kernel_flip(k, fk)), reference);

        const auto sk = generate_shuffle_key({rng.next()}, mode, p);
        const auto sy = shuffle_encrypt(x, sk, {mode, p});
        EXPECT_LE(max_rel(embed(sy.data, transform_kernel_shuffle(k, sk)), reference), 1e-12)
            << "P=" << p << " d=" << d;
      }
    }
  }
}

TEST(Commutation, ArgmaxIsStableUnderCorrectKey) {
  TestRng rng(24);
  int shuffle_checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 1 + rng.below(6);
    const auto k = random_kernel(rng.next(), Mode::k2d, p, 8);
    const auto x = testing::random_matrix(rng, 4 * p, 4 * p);
    const auto ref = embed(x, k);
    const auto argmax = [](const Embedding& e) {
      return std::max_element(e.values.begin(), e.values.end()) - e.values.begin();
    };
    const auto fk = generate_flip_key({rng.next()}, Mode::k2d, p);
    EXPECT_EQ(argmax(embed(flip_encrypt(x, fk, {Mode::k2d, p}).data, transform_kernel_flip(k, fk))),
              argmax(ref));

    auto sorted = ref.values;
    std::sort(sorted.rbegin(), sorted.rend());
    if (sorted.size() < 2 || sorted[0] - sorted[1] <= 1e-9) continue;
    ++shuffle_checked;
    const auto sk = generate_shuffle_key({rng.next()}, Mode::k2d, p);
    EXPECT_EQ(
        argmax(embed(shuffle_encrypt(x, sk, {Mode::k2d, p}).data, transform_kernel_shuffle(k, sk))),
        argmax(ref));
  }
  EXPECT_GT(shuffle_checked, 150);
}

TEST(VerifyScenarios, FlipCorrectKeyIsExact) {
  TestRng rng(25);
  const auto x = testing::random_matrix(rng, 80, 100, 0.0, 5.0);
  const auto k = random_kernel(1, Mode::k2d, 3, 16);
  const auto report = verify_scenarios(x, k, generate_flip_key({1}, Mode::k2d, 3),
                                       generate_flip_key({2}, Mode::k2d, 3));
  EXPECT_EQ(report.max_rel_diff_correct(), 0.0);
  EXPECT_GT(report.mean_rel_diff_incorrect(), 1e-3);
  EXPECT_GT(report.mean_rel_diff_plain(), 1e-3);
  EXPECT_FALSE(report.degenerate_kernel);
}

TEST(VerifyScenarios, ShuffleCorrectKeyWithinTolerance) {
  TestRng rng(26);
  const auto x = testing::random_sequence(rng, 16000);
  const auto k = random_kernel(2, Mode::k1d, 10, 16);
  const auto report = verify_scenarios(x, k, generate_shuffle_key({1}, Mode::k1d, 10),
                                       generate_shuffle_key({2}, Mode::k1d, 10));
  EXPECT_LE(report.max_rel_diff_correct(), 1e-12);
  EXPECT_GT(report.mean_rel_diff_incorrect(), 1e-3);
}

TEST(VerifyScenarios, DegenerateKernelIsFlagged) {
  TestRng rng(27);
  const auto x = testing::random_matrix(rng, 6, 6);
  PatchEmbedKernel k{Mode::k2d, 3, 2, std::vector<double>(18, 0.0)};
  const auto report = verify_scenarios(x, k, generate_flip_key({1}, Mode::k2d, 3),
                                       generate_flip_key({2}, Mode::k2d, 3));
  EXPECT_TRUE(report.degenerate_kernel);
  EXPECT_EQ(report.mean_rel_diff_incorrect(), 0.0);
}

TEST(VerifyScenarios, RejectsEqualOrMixedKeys) {
  TestRng rng(28);
  const auto x = testing::random_matrix(rng, 6, 6);
  const auto k = random_kernel(1, Mode::k2d, 3, 2);
  const Key a = generate_flip_key({1}, Mode::k2d, 3);
  EXPECT_THROW(verify_scenarios(x, k, a, a), Error);
  EXPECT_THROW(verify_scenarios(x, k, a, generate_shuffle_key({1}, Mode::k2d, 3)), Error);
}

TEST(EmbeddingDistance, ChannelwiseRelativeFrobenius) {
  Embedding ref{Mode::k1d, 2, 1, 2, {3, 1, 4, 1}};
  Embedding test{Mode::k1d, 2, 1, 2, {3, 1, 0, 1}};
  // Channel 0: columns (3, 4) vs (3, 0): |(0, 4)| / |(3, 4)| = 0.8; channel 1 is exact.
  const auto d = embedding_distance(test, ref);
  EXPECT_DOUBLE_EQ(d.max_rel, 0.8);
  EXPECT_DOUBLE_EQ(d.mean_rel, 0.4);
}

}  // namespace
}  // namespace ksc
