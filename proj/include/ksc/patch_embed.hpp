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
#include <cstdint>
#include <vector>

#include "ksc/blocking.hpp"
#include "ksc/keys.hpp"
#include "ksc/signal.hpp"

namespace ksc {

// First-layer convolution kernel with kernel size = stride = P and no bias.
// Weights are stored (i, j, c)-major: weights[(i * P + j) * d + c] in 2d
// and weights[i * d + c] in 1d, where i is the time offset and j the
// frequency offset inside the patch. The flat patch position l = i * P + j
// is the same position blocking assigns to a block cell.
struct PatchEmbedKernel {
  Mode mode = Mode::k2d;
  std::size_t patch = 1;  // P
  std::size_t dim = 1;    // d
  std::vector<double> weights;

  std::size_t patch_length() const { return mode == Mode::k2d ? patch * patch : patch; }
  double at(std::size_t l, std::size_t c) const { return weights[l * dim + c]; }

  // Throws kInvalidParameter for P = 0, d = 0, a size mismatch or a
  // non-finite weight.
  void validate() const;

  friend bool operator==(const PatchEmbedKernel&, const PatchEmbedKernel&) = default;
};

// Output of the patch embedding: one d-vector per patch, patches in reading
// order. values[(u * cols + v) * dim + c].
struct Embedding {
  Mode mode = Mode::k2d;
  std::size_t rows = 0;  // T / P (or N / P)
  std::size_t cols = 0;  // F / P, 1 in 1d
  std::size_t dim = 0;
  std::vector<double> values;

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

// Weights uniform in [-1, 1) from the splitmix64 stream of `seed`.
PatchEmbedKernel random_kernel(std::uint64_t seed, Mode mode, std::size_t patch,
                               std::size_t dim);

// out[u, v, c] = sum_l E[l, c] * X_patch(u, v)[l], l ascending. Under
// kPassthrough trailing rows/columns that do not fill a patch are ignored,
// which is what a strided convolution does.
Embedding embed(const Signal& x, const PatchEmbedKernel& kernel,
                RemainderPolicy remainder = RemainderPolicy::kStrict);

// E'[i, c] = E[K_s(i), c]. With X' = shuffle_encrypt(X, K_s) this gives
// sum_i E'[i] X'[i] = sum_i E[K_s(i)] X[K_s(i)] = sum_l E[l] X[l].
// This is E' = E_s E with E_s the permutation matrix of K_s.
PatchEmbedKernel transform_kernel_shuffle(const PatchEmbedKernel& kernel,
                                          const ShuffleKey& key);

// E'[l, c] = -E[l, c] where k_l = 1.
PatchEmbedKernel transform_kernel_flip(const PatchEmbedKernel& kernel,
                                       const FlipKey& key);

PatchEmbedKernel transform_kernel(const PatchEmbedKernel& kernel, const Key& key);

struct ScenarioDiff {
  double max_rel = 0.0;   // max over output channels
  double mean_rel = 0.0;  // mean over output channels
};

// Embedding-level analogue of the Plain / Correct key / Incorrect key
// evaluation. The model kernel is always transformed with the correct key;
// the query is encrypted with the correct key, a wrong key, or not at all.
// Each channel's distance is ||A_c - R_c||_F / ||R_c||_F against the plain
// model on the plain query.
struct VerifyReport {
  CipherKind cipher = CipherKind::kShuffle;
  Mode mode = Mode::k2d;
  std::size_t patch = 0;
  std::size_t dim = 0;
  ScenarioDiff correct;
  ScenarioDiff incorrect;
  ScenarioDiff plain;
  bool degenerate_kernel = false;

  double max_rel_diff_correct() const { return correct.max_rel; }
  double mean_rel_diff_incorrect() const { return incorrect.mean_rel; }
  double mean_rel_diff_plain() const { return plain.mean_rel; }
};

// Channel-wise relative Frobenius distances of `test` against `reference`.
ScenarioDiff embedding_distance(const Embedding& test, const Embedding& reference);

// Throws kInvalidParameter when the two keys are equal or of different
// cipher kinds.
VerifyReport verify_scenarios(const Signal& x, const PatchEmbedKernel& kernel,
                              const Key& key_correct, const Key& key_incorrect,
                              RemainderPolicy remainder = RemainderPolicy::kPassthrough);

}  // namespace ksc
