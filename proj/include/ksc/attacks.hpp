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
#include <optional>
#include <string>
#include <vector>

#include "ksc/dsp.hpp"
#include "ksc/keys.hpp"

namespace ksc {

// ---------------------------------------------------------------------------
// Phase reconstruction: estimate a waveform from a magnitude spectrogram.

enum class PhaseMethod { kGriffinLim, kPghi };

std::string_view to_string(PhaseMethod method);
PhaseMethod parse_phase_method(std::string_view text);

struct PhaseReconConfig {
  PhaseMethod method = PhaseMethod::kGriffinLim;
  std::size_t iterations = 100;      // Griffin-Lim
  double relative_threshold = 1e-7;  // PGHI: bins below threshold * max get random phase
  std::uint64_t seed = 0;            // PGHI random phase fill

  void validate() const;
};

// Hann window approximated by a Gaussian exp(-pi t^2 / lambda):
// lambda = kHannGaussianFit * L^2.
constexpr double kHannGaussianFit = 0.25645;

// ||(|C| - S)||_F / ||S||_F with each interior bin counted twice, i.e. the
// norm of the full two-sided spectrum. Zero when S is all zeros.
double spectral_convergence(const ComplexSpectrogram& estimate, const Spectrogram& target);

// griffin_lim: starts from zero phase and alternates inverse STFT / STFT
// projections while keeping the target magnitude. trace, when given,
// receives the spectral convergence of each iterate.
//
// pghi: phase-gradient heuristic integration. Phase derivatives come from
// the log magnitude through the Gaussian window relations
//   d(phase)/dk = -lambda / (N H) * d(log S)/dt - 2 pi c / N
//   d(phase)/dt =  2 pi H k / N + N H / lambda * d(log S)/dk
// (N fft size, H hop, c window centre) and are integrated by trapezoidal
// steps, always expanding from the loudest already-assigned bin.
//
// Throws kInvalidParameter unless spec.kind is linear_magnitude.
Waveform phase_reconstruct(const Spectrogram& magnitude, const PhaseReconConfig& cfg,
                           std::vector<double>* trace = nullptr);

struct ReconstructionMetrics {
  double lsd_db = 0.0;
  std::optional<double> snr_db;  // absent when the original is silent
};

// Truncates both signals to the shorter length, then compares their STFT
// magnitudes (lsd) and samples (snr). Throws kInvalidParameter on a sample
// rate mismatch.
ReconstructionMetrics evaluate_reconstruction(const Waveform& original,
                                              const Waveform& reconstructed,
                                              const StftParams& params);

// ---------------------------------------------------------------------------
// Ciphertext-only key recovery.
//
// The attacker knows the block size and sees the encrypted spectrogram scaled
// to [0, 255]. Candidate keys are scored by the total absolute difference
// between neighbouring cells of the trial decryption, inside blocks and across
// block borders. Cells outside the block tiling are ignored. Flip candidates
// are decrypted around the mid-level 127.5; a candidate and its complement
// score the same, and the tie goes to the one whose decryption has the larger
// sum (the plaintext is assumed to sit mostly above mid-level).
//
// When the key space fits in the budget every key is scored. Otherwise the
// search hill-climbs (pairwise swaps for shuffle keys, single bit flips for
// flip keys, first improvement in lexicographic move order) from the initial
// key or the identity, then restarts from keys drawn from the seeded
// splitmix64 stream until the budget is spent. Ties between equal scores go
// to the lexicographically smaller key.

struct KeyRecoveryOptions {
  std::uint64_t budget = 100000;
  std::uint64_t seed = 0;
  std::optional<Key> truth;    // enables key_accuracy
  std::optional<Key> initial;  // first hill-climb start
};

struct AttackReport {
  std::optional<Key> recovered_key;
  std::optional<double> key_accuracy;  // fraction of key entries correct
  std::optional<double> lsd_db;
  std::optional<double> snr_db;
  std::uint64_t candidates = 0;
  bool exhaustive = false;
  double objective = 0.0;
};

double key_accuracy(const Key& recovered, const Key& truth);

// scaled: the 2d encrypted signal in byte range. Throws kInvalidParameter for
// budget < 1, a 1d signal, or a signal smaller than one block.
AttackReport key_recovery_attack(const Signal& scaled, CipherKind cipher,
                                 std::size_t block_size, const KeyRecoveryOptions& options);

// Score of one candidate key under the objective above (exposed for tests).
double key_recovery_objective(const Signal& scaled, const Key& candidate);

// End-to-end harness: encrypt `plain` (passthrough remainder), scale to byte
// range, attack, decrypt with the recovered key and record the LSD of the
// result against the plaintext. Log-magnitude spectrograms are compared
// after exponentiation; other kinds are compared as magnitudes directly.
AttackReport evaluate_key_recovery(const Spectrogram& plain, const Key& key,
                                   const KeyRecoveryOptions& options,
                                   Spectrogram* decrypted = nullptr);

// `key=<entries> accuracy=<x> lsd_db=<x> candidates=<n> search=<mode>
// objective=<x>`; key entries comma separated, missing values as "na".
std::string format_attack_report(const AttackReport& report);

}  // namespace ksc
