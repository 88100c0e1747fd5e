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
#include <string>

#include "ksc/cipher.hpp"
#include "ksc/error.hpp"
#include "ksc/parallel.hpp"

namespace ksc {
namespace {

template <typename K>
void check_key(const PatchEmbedKernel& kernel, const K& key) {
  if (key.mode() != kernel.mode || key.block_size() != kernel.patch) {
    fail(ErrorCode::kKeyMismatch,
         "key (" + std::string(to_string(key.mode())) + ", M=" +
             std::to_string(key.block_size()) + ") does not fit kernel (" +
             std::string(to_string(kernel.mode)) + ", P=" +
             std::to_string(kernel.patch) + ")");
  }
}

}  // namespace

void PatchEmbedKernel::validate() const {
  if (patch == 0 || dim == 0) {
    fail(ErrorCode::kInvalidParameter, "kernel needs P >= 1 and d >= 1");
  }
  if (weights.size() != patch_length() * dim) {
    fail(ErrorCode::kInvalidParameter,
         "kernel holds " + std::to_string(weights.size()) + " weights, expected " +
             std::to_string(patch_length() * dim));
  }
  for (double w : weights) {
    if (!std::isfinite(w)) fail(ErrorCode::kInvalidParameter, "non-finite kernel weight");
  }
}

PatchEmbedKernel random_kernel(std::uint64_t seed, Mode mode, std::size_t patch,
                               std::size_t dim) {
  PatchEmbedKernel k;
  k.mode = mode;
  k.patch = patch;
  k.dim = dim;
  if (patch == 0 || dim == 0) {
    fail(ErrorCode::kInvalidParameter, "kernel needs P >= 1 and d >= 1");
  }
  k.weights.resize(k.patch_length() * dim);
  SplitMix64 rng(seed);
  for (auto& w : k.weights) {
    w = static_cast<double>(rng.next() >> 11) * 0x1.0p-52 - 1.0;
  }
  return k;
}

Embedding embed(const Signal& x, const PatchEmbedKernel& kernel,
                RemainderPolicy remainder) {
  kernel.validate();
  const BlockGrid grid = partition(x, {kernel.mode, kernel.patch, remainder});
  Embedding out;
  out.mode = kernel.mode;
  out.rows = grid.grid_rows;
  out.cols = grid.grid_cols;
  out.dim = kernel.dim;
  out.values.assign(grid.block_count() * kernel.dim, 0.0);

  const std::size_t len = kernel.patch_length();
  const std::size_t dim = kernel.dim;
  parallel_for(grid.block_count(), [&](std::size_t b) {
    const auto patch = grid.block(b);
    double* dst = out.values.data() + b * dim;
    for (std::size_t c = 0; c < dim; ++c) {
      double acc = 0.0;
      for (std::size_t l = 0; l < len; ++l) acc += kernel.weights[l * dim + c] * patch[l];
      dst[c] = acc;
    }
  });
  return out;
}

PatchEmbedKernel transform_kernel_shuffle(const PatchEmbedKernel& kernel,
                                          const ShuffleKey& key) {
  kernel.validate();
  check_key(kernel, key);
  PatchEmbedKernel out = kernel;
  const std::size_t dim = kernel.dim;
  for (std::size_t i = 0; i < key.size(); ++i) {
    const std::size_t src = key(i + 1) - 1;
    std::copy_n(kernel.weights.begin() + src * dim, dim, out.weights.begin() + i * dim);
  }
  return out;
}

PatchEmbedKernel transform_kernel_flip(const PatchEmbedKernel& kernel,
                                       const FlipKey& key) {
  kernel.validate();
  check_key(kernel, key);
  PatchEmbedKernel out = kernel;
  const std::size_t dim = kernel.dim;
  for (std::size_t l = 0; l < key.size(); ++l) {
    if (!key.bits()[l]) continue;
    for (std::size_t c = 0; c < dim; ++c) out.weights[l * dim + c] = -out.weights[l * dim + c];
  }
  return out;
}

PatchEmbedKernel transform_kernel(const PatchEmbedKernel& kernel, const Key& key) {
  if (const auto* k = std::get_if<ShuffleKey>(&key)) {
    return transform_kernel_shuffle(kernel, *k);
  }
  return transform_kernel_flip(kernel, std::get<FlipKey>(key));
}

ScenarioDiff embedding_distance(const Embedding& test, const Embedding& reference) {
  if (test.rows != reference.rows || test.cols != reference.cols ||
      test.dim != reference.dim || test.values.size() != reference.values.size()) {
    fail(ErrorCode::kShapeMismatch, "embeddings differ in shape");
  }
  const std::size_t dim = reference.dim;
  const std::size_t patches = dim ? reference.values.size() / dim : 0;
  ScenarioDiff out;
  if (dim == 0) return out;
  double sum = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t p = 0; p < patches; ++p) {
      const double r = reference.values[p * dim + c];
      const double e = test.values[p * dim + c] - r;
      num += e * e;
      den += r * r;
    }
    const double rel = num == 0.0 ? 0.0 : std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
    out.max_rel = std::max(out.max_rel, rel);
    sum += rel;
  }
  out.mean_rel = sum / static_cast<double>(dim);
  return out;
}

VerifyReport verify_scenarios(const Signal& x, const PatchEmbedKernel& kernel,
                              const Key& key_correct, const Key& key_incorrect,
                              RemainderPolicy remainder) {
  if (cipher_of(key_correct) != cipher_of(key_incorrect)) {
    fail(ErrorCode::kInvalidParameter, "correct and incorrect keys use different ciphers");
  }
  if (key_correct == key_incorrect) {
    fail(ErrorCode::kInvalidParameter, "incorrect key equals the correct key");
  }
  const PatchEmbedKernel model = transform_kernel(kernel, key_correct);
  const BlockSpec spec = spec_for(key_correct, remainder);

  const Embedding reference = embed(x, kernel, remainder);
  const Embedding correct = embed(encrypt(x, key_correct, spec).data, model, remainder);
  const Embedding incorrect = embed(encrypt(x, key_incorrect, spec).data, model, remainder);
  const Embedding plain = embed(x, model, remainder);

  VerifyReport report;
  report.cipher = cipher_of(key_correct);
  report.mode = kernel.mode;
  report.patch = kernel.patch;
  report.dim = kernel.dim;
  report.degenerate_kernel = std::all_of(kernel.weights.begin(), kernel.weights.end(),
                                         [](double w) { return w == 0.0; });
  report.correct = embedding_distance(correct, reference);
  report.incorrect = embedding_distance(incorrect, reference);
  report.plain = embedding_distance(plain, reference);
  return report;
}

}  // namespace ksc
