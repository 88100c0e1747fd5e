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
#include <span>
#include <utility>
#include <vector>

#include "ksc/signal.hpp"

namespace ksc {

enum class RemainderPolicy { kStrict, kPassthrough };

struct BlockSpec {
  Mode mode = Mode::k2d;
  std::size_t block_size = 1;
  RemainderPolicy remainder = RemainderPolicy::kStrict;

  std::size_t block_length() const {
    return mode == Mode::k2d ? block_size * block_size : block_size;
  }
};

// Flattened blocks plus whatever the tiling did not cover.
//
// Blocks are enumerated in reading order (time-major): block (u, v) is
// blocks[u * grid_cols + v]. Inside a block the flat position of the cell at
// local time t and local frequency f is t * M + f (0-based here, t*M + f + 1
// in the 1-based notation used by keys). The same convention flattens patch
// embedding kernels, which is what makes the kernel transforms line up.
struct BlockGrid {
  BlockSpec spec;
  std::size_t grid_rows = 0;  // floor(T / M), or the block count in 1d
  std::size_t grid_cols = 0;  // floor(F / M); always 1 in 1d
  std::size_t original_rows = 0;
  std::size_t original_cols = 0;
  // block_count() * block_length() values, block-major.
  std::vector<double> blocks;
  // Cells outside the tiled region: (row-major index in the original, value).
  std::vector<std::pair<std::size_t, double>> remainder;

  std::size_t block_count() const { return grid_rows * grid_cols; }

  std::span<double> block(std::size_t b) {
    const std::size_t l = spec.block_length();
    return {blocks.data() + b * l, l};
  }
  std::span<const double> block(std::size_t b) const {
    const std::size_t l = spec.block_length();
    return {blocks.data() + b * l, l};
  }
};

// Throws kDimension under kStrict when T, F (or N) are not multiples of M,
// and kKeyMismatch when the signal and spec disagree on mode.
BlockGrid partition(const Signal& x, const BlockSpec& spec);

// Exact inverse of partition. Throws kStructural on inconsistent metadata.
Signal assemble(const BlockGrid& grid);

}  // namespace ksc
