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

#include "ksc/blocking.hpp"

#include <string>

#include "ksc/error.hpp"

namespace ksc {
namespace {

void check_spec(const Signal& x, const BlockSpec& spec) {
  if (spec.block_size == 0) {
    fail(ErrorCode::kInvalidParameter, "block size M must be >= 1");
  }
  if (x.mode != spec.mode) {
    fail(ErrorCode::kKeyMismatch,
         "block spec is " + std::string(to_string(spec.mode)) + " but signal is " +
             std::string(to_string(x.mode)));
  }
  if (x.values.size() != x.rows * x.cols) {
    fail(ErrorCode::kStructural, "signal storage does not match its shape");
  }
}

}  // namespace

BlockGrid partition(const Signal& x, const BlockSpec& spec) {
  check_spec(x, spec);
  const std::size_t m = spec.block_size;
  const bool two_d = spec.mode == Mode::k2d;

  if (spec.remainder == RemainderPolicy::kStrict) {
    const bool ok = x.rows % m == 0 && (!two_d || x.cols % m == 0);
    if (!ok) {
      std::string msg = "dimensions not divisible by block size: ";
      msg += two_d ? "T=" + std::to_string(x.rows) + " F=" + std::to_string(x.cols)
                   : "N=" + std::to_string(x.rows);
      msg += " M=" + std::to_string(m);
      fail(ErrorCode::kDimension, msg);
    }
  }

  BlockGrid grid;
  grid.spec = spec;
  grid.original_rows = x.rows;
  grid.original_cols = x.cols;
  grid.grid_rows = x.rows / m;
  grid.grid_cols = two_d ? x.cols / m : 1;

  const std::size_t len = spec.block_length();
  grid.blocks.resize(grid.block_count() * len);

  if (!two_d) {
    const std::size_t covered = grid.grid_rows * m;
    std::copy(x.values.begin(), x.values.begin() + covered, grid.blocks.begin());
    for (std::size_t n = covered; n < x.rows; ++n) {
      grid.remainder.emplace_back(n, x.values[n]);
    }
    return grid;
  }

  for (std::size_t u = 0; u < grid.grid_rows; ++u) {
    for (std::size_t v = 0; v < grid.grid_cols; ++v) {
      auto dst = grid.block(u * grid.grid_cols + v);
      for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t f = 0; f < m; ++f) {
          dst[t * m + f] = x.at(u * m + t, v * m + f);
        }
      }
    }
  }
  const std::size_t covered_rows = grid.grid_rows * m;
  const std::size_t covered_cols = grid.grid_cols * m;
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) {
      if (r >= covered_rows || c >= covered_cols) {
        grid.remainder.emplace_back(r * x.cols + c, x.at(r, c));
      }
    }
  }
  return grid;
}

Signal assemble(const BlockGrid& grid) {
  const std::size_t m = grid.spec.block_size;
  const bool two_d = grid.spec.mode == Mode::k2d;
  const std::size_t total = grid.original_rows * grid.original_cols;
  const std::size_t covered_rows = grid.grid_rows * m;
  const std::size_t covered_cols = two_d ? grid.grid_cols * m : 1;

  const bool consistent =
      m > 0 && covered_rows <= grid.original_rows &&
      covered_cols <= grid.original_cols && (two_d || grid.original_cols == 1) &&
      (two_d || grid.grid_cols == 1) &&
      grid.blocks.size() == grid.block_count() * grid.spec.block_length() &&
      grid.remainder.size() == total - covered_rows * covered_cols;
  if (!consistent) {
    fail(ErrorCode::kStructural, "block grid metadata is inconsistent");
  }

  Signal out;
  out.mode = grid.spec.mode;
  out.rows = grid.original_rows;
  out.cols = grid.original_cols;
  out.values.assign(total, 0.0);

  if (!two_d) {
    std::copy(grid.blocks.begin(), grid.blocks.end(), out.values.begin());
  } else {
    for (std::size_t u = 0; u < grid.grid_rows; ++u) {
      for (std::size_t v = 0; v < grid.grid_cols; ++v) {
        auto src = grid.block(u * grid.grid_cols + v);
        for (std::size_t t = 0; t < m; ++t) {
          for (std::size_t f = 0; f < m; ++f) {
            out.at(u * m + t, v * m + f) = src[t * m + f];
          }
        }
      }
    }
  }
  for (const auto& [index, value] : grid.remainder) {
    const std::size_t r = index / out.cols;
    const std::size_t c = index % out.cols;
    if (index >= total || (r < covered_rows && c < covered_cols)) {
      fail(ErrorCode::kStructural,
           "remainder cell " + std::to_string(index) + " lies inside the tiled region");
    }
    out.values[index] = value;
  }
  return out;
}

}  // namespace ksc
