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

#include <complex>
#include <cstddef>
#include <span>

namespace ksc {

// Real-to-half-complex FFT of fixed size n backed by FFTW. Plans are created
// under a global lock; an instance owns its buffers and must not be shared
// between threads, but separate instances may run concurrently.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  // out[k] = sum_t in[t] exp(-2 pi i k t / n), k = 0..n/2.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Unnormalized inverse: out[t] = sum_k X[k] exp(2 pi i k t / n) over the
  // Hermitian extension of `in`. Divide by n for the true inverse.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_;
  void* complex_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace ksc
