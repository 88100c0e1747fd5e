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

#include "support/test_support.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace ksc::testing {

TestRng::TestRng(std::uint64_t seed) : state_(seed ^ 0x5DEECE66DULL) {}

// xorshift64*.
std::uint64_t TestRng::next() {
  if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

double TestRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double TestRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t TestRng::below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

Signal random_matrix(TestRng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return Signal::matrix(rows, cols, std::move(v));
}

Signal random_sequence(TestRng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return Signal::sequence(std::move(v));
}

Embedding naive_embed(const Signal& x, const PatchEmbedKernel& kernel) {
  const std::size_t p = kernel.patch;
  const std::size_t d = kernel.dim;
  Embedding out;
  out.mode = kernel.mode;
  out.dim = d;
  if (kernel.mode == Mode::k1d) {
    out.rows = x.rows / p;
    out.cols = 1;
    out.values.assign(out.rows * d, 0.0);
    for (std::size_t u = 0; u < out.rows; ++u) {
      for (std::size_t c = 0; c < d; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < p; ++i) acc += kernel.weights[i * d + c] * x.values[u * p + i];
        out.values[u * d + c] = acc;
      }
    }
    return out;
  }
  out.rows = x.rows / p;
  out.cols = x.cols / p;
  out.values.assign(out.rows * out.cols * d, 0.0);
  for (std::size_t u = 0; u < out.rows; ++u) {
    for (std::size_t v = 0; v < out.cols; ++v) {
      for (std::size_t c = 0; c < d; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
          for (std::size_t j = 0; j < p; ++j) {
            acc += kernel.weights[(i * p + j) * d + c] * x.at(u * p + i, v * p + j);
          }
        }
        out.values[(u * out.cols + v) * d + c] = acc;
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> permutation_matrix(const std::vector<std::uint32_t>& key) {
  std::vector<std::vector<double>> m(key.size(), std::vector<double>(key.size(), 0.0));
  for (std::size_t i = 0; i < key.size(); ++i) m[i][key[i] - 1] = 1.0;
  return m;
}

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("ksc_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

int run_cli(const std::string& args, const std::string& env) {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(KSC_CLI_PATH) + " " + args +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace ksc::testing
