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

// Acceptance driver. Prints one PASS/FAIL line per criterion; with
// --criterion N only that criterion runs. Exit status is nonzero when any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ksc/attacks.hpp"
#include "ksc/cipher.hpp"
#include "ksc/patch_embed.hpp"
#include "ksc/presets.hpp"
#include "ksc/synth.hpp"
#include "support/test_support.hpp"

namespace {

using namespace ksc;
using ksc::testing::TestRng;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool bit_equal(const Signal& a, const Signal& b) {
  return a.rows == b.rows && a.cols == b.cols && a.mode == b.mode &&
         std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome commutation() {
  const auto start = Clock::now();
  TestRng rng(101);
  double worst_shuffle = 0.0;
  std::size_t flip_mismatch = 0;
  std::size_t trials = 0;
  for (CipherKind cipher : {CipherKind::kShuffle, CipherKind::kFlip}) {
    for (Mode mode : {Mode::k1d, Mode::k2d}) {
      for (int i = 0; i < 1000; ++i, ++trials) {
        const std::size_t p = 1 + rng.below(mode == Mode::k2d ? 8 : 16);
        const std::size_t d = 1 + rng.below(16);
        const Signal x = mode == Mode::k2d
                             ? testing::random_matrix(rng, p * (1 + rng.below(8)) + rng.below(p),
                                                      p * (1 + rng.below(8)) + rng.below(p), -10, 10)
                             : testing::random_sequence(rng, p * (1 + rng.below(64)) + rng.below(p));
        const auto kernel = random_kernel(rng.next(), mode, p, d);
        const Key key = generate_key(cipher, {rng.next()}, mode, p);
        const auto spec = spec_for(key, RemainderPolicy::kPassthrough);
        const Embedding ref = embed(x, kernel, RemainderPolicy::kPassthrough);
        const Embedding got = embed(encrypt(x, key, spec).data, transform_kernel(kernel, key),
                                    RemainderPolicy::kPassthrough);
        if (cipher == CipherKind::kFlip) {
          if (got != ref) ++flip_mismatch;
        } else {
          worst_shuffle = std::max(worst_shuffle, embedding_distance(got, ref).max_rel);
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {flip_mismatch == 0 && worst_shuffle <= 1e-12 && elapsed < 60.0,
          std::to_string(trials) + " triples, flip mismatches " + std::to_string(flip_mismatch) +
              ", shuffle max relative diff " + fmt(worst_shuffle) + ", " + fmt(elapsed) + " s"};
}

struct Corpus {
  std::vector<Waveform> waves;
  std::vector<Signal> log_mels;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    for (std::uint64_t s = 0; s < 20; ++s) {
      out.waves.push_back(synthesize_speech(500 + s, 1.0));
      out.log_mels.push_back(log_mel(stft(out.waves.back(), StftParams{}), 80).values);
    }
    return out;
  }();
  return c;
}

Outcome wrong_key_degradation() {
  TestRng rng(102);
  const Corpus& c = corpus();
  std::size_t above = 0;
  const std::size_t trials = 1000;
  double lowest = INFINITY;
  for (std::size_t i = 0; i < trials; ++i) {
    const CipherKind cipher = i % 2 ? CipherKind::kFlip : CipherKind::kShuffle;
    const Mode mode = (i / 2) % 2 ? Mode::k1d : Mode::k2d;
    const std::size_t m = mode == Mode::k2d ? 3 : 10;
    const Signal& x = mode == Mode::k2d ? c.log_mels[rng.below(20)] : c.waves[rng.below(20)].to_signal();
    const auto kernel = random_kernel(rng.next(), mode, m, 16);
    const Key correct = generate_key(cipher, {rng.next()}, mode, m);
    Key wrong = correct;
    while (true) {
      wrong = generate_key(cipher, {rng.next()}, mode, m);
      const bool identity = std::visit(
          [](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ShuffleKey>) {
              return k.is_identity();
            } else {
              return k == FlipKey::zeros(k.mode(), k.block_size());
            }
          },
          wrong);
      if (!identity && wrong != correct) break;
    }
    const auto report = verify_scenarios(x, kernel, correct, wrong);
    lowest = std::min(lowest, report.mean_rel_diff_incorrect());
    if (report.mean_rel_diff_incorrect() > 1e-3) ++above;
  }
  const double rate = static_cast<double>(above) / trials;
  return {rate >= 0.99, std::to_string(above) + "/" + std::to_string(trials) +
                            " trials above 1e-3, lowest mean relative diff " + fmt(lowest)};
}

Outcome round_trip() {
  TestRng rng(103);
  std::size_t failures = 0;
  std::size_t runs = 0;
  for (CipherKind cipher : {CipherKind::kShuffle, CipherKind::kFlip}) {
    for (int i = 0; i < 100; ++i) {
      const Signal x2 = testing::random_matrix(rng, 80, 100, -25, 5);
      const Key k2 = generate_key(cipher, {rng.next()}, Mode::k2d, 3);
      const auto y2 = encrypt(x2, k2, spec_for(k2, RemainderPolicy::kPassthrough));
      failures += !bit_equal(decrypt(y2, k2), x2);

      const Signal x1 = testing::random_sequence(rng, 16000 + rng.below(10));
      const Key k1 = generate_key(cipher, {rng.next()}, Mode::k1d, 10);
      const auto y1 = encrypt(x1, k1, spec_for(k1, RemainderPolicy::kPassthrough));
      failures += !bit_equal(decrypt(y1, k1), x1);
      runs += 2;
    }
  }
  return {failures == 0, std::to_string(runs - failures) + "/" + std::to_string(runs) +
                             " bit-exact round trips (80x100 at M=3, 1d at M=10)"};
}

Outcome key_space() {
  const auto start = Clock::now();
  const Signal block = Signal::matrix(2, 2, {0.3, -1.7, 2.9, 4.1});
  std::set<std::vector<double>> shuffled;
  std::vector<std::uint32_t> perm = {1, 2, 3, 4};
  do {
    shuffled.insert(encrypt(block, ShuffleKey(Mode::k2d, 2, perm), {Mode::k2d, 2}).data.values);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::set<std::vector<double>> flipped;
  for (unsigned code = 0; code < 16; ++code) {
    std::vector<std::uint8_t> bits(4);
    for (int i = 0; i < 4; ++i) bits[i] = (code >> i) & 1;
    flipped.insert(encrypt(block, FlipKey(Mode::k2d, 2, bits), {Mode::k2d, 2}).data.values);
  }
  const bool ok = shuffled.size() == 24 && flipped.size() == 16 &&
                  key_space_size(CipherKind::kShuffle, Mode::k2d, 2) == 24 &&
                  key_space_size(CipherKind::kFlip, Mode::k2d, 2) == 16;
  return {ok, "shuffle " + std::to_string(shuffled.size()) + " distinct (key space " +
                  key_space_size(CipherKind::kShuffle, Mode::k2d, 2).str() + "), flip " +
                  std::to_string(flipped.size()) + " distinct (key space " +
                  key_space_size(CipherKind::kFlip, Mode::k2d, 2).str() + "), " +
                  fmt(seconds_since(start)) + " s"};
}

Outcome presets() {
  const Preset asr = preset_asr3();
  const Preset asv = preset_asv10();
  const bool ok = asr.mode == Mode::k2d && asr.block_size == 3 && asr.feature &&
                  *asr.feature == SpectrogramKind::kLogMel && asr.n_mels == 80 &&
                  asv.mode == Mode::k1d && asv.block_size == 10 && !asv.feature;
  return {ok, "asr3=(" + std::string(to_string(asr.mode)) + ", M=" + std::to_string(asr.block_size) +
                  ", " + std::to_string(asr.n_mels) + " log-mel) asv10=(" +
                  std::string(to_string(asv.mode)) + ", M=" + std::to_string(asv.block_size) + ")"};
}

Outcome phase_attack() {
  const auto start = Clock::now();
  const StftParams params{};
  const PhaseReconConfig cfg{};
  int wins[2] = {0, 0};
  std::ostringstream lines;
  for (std::uint64_t clip = 0; clip < 10; ++clip) {
    const Waveform w = synthesize_speech(1000 + clip, 2.0);
    const auto c = stft(w, params);
    const Spectrogram logm = log_magnitude(c);
    const double plain = evaluate_reconstruction(w, phase_reconstruct(magnitude(c), cfg), params).lsd_db;
    lines << "\n    clip " << clip << ": plain " << fmt(plain);
    for (int ci = 0; ci < 2; ++ci) {
      const CipherKind cipher = ci ? CipherKind::kFlip : CipherKind::kShuffle;
      const Key key = generate_key(cipher, {clip + 7}, Mode::k2d, 3);
      Spectrogram enc = logm;
      enc.values = encrypt(logm.values, key, spec_for(key, RemainderPolicy::kPassthrough)).data;
      const double lsd =
          evaluate_reconstruction(w, phase_reconstruct(linear_from_log_magnitude(enc), cfg), params)
              .lsd_db;
      wins[ci] += lsd > plain;
      lines << " " << to_string(cipher) << " " << fmt(lsd);
    }
  }
  const double elapsed = seconds_since(start);
  return {wins[0] >= 9 && wins[1] >= 9 && elapsed < 300.0,
          "encrypted LSD above plain: shuffle " + std::to_string(wins[0]) + "/10, flip " +
              std::to_string(wins[1]) + "/10, " + fmt(elapsed) + " s (LSD dB)" + lines.str()};
}

Spectrogram smooth_image(std::size_t rows, std::size_t cols, double phase) {
  Spectrogram s;
  std::vector<double> v(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      v[r * cols + c] = 100.0 + 40.0 * std::sin(0.15 * r + phase) + 30.0 * std::cos(0.11 * c) +
                        0.3 * r + 0.7 * c;
    }
  }
  s.values = Signal::matrix(rows, cols, std::move(v));
  return s;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

Outcome key_recovery() {
  bool exhaustive_ok = true;
  for (std::uint64_t s = 0; s < 5; ++s) {
    for (CipherKind cipher : {CipherKind::kShuffle, CipherKind::kFlip}) {
      const Key key = generate_key(cipher, {s}, Mode::k2d, 2);
      const auto r = evaluate_key_recovery(smooth_image(41, 31, static_cast<double>(s)), key, {});
      exhaustive_ok = exhaustive_ok && r.exhaustive && r.key_accuracy && *r.key_accuracy == 1.0;
    }
  }

  std::vector<double> accuracy;
  std::vector<double> lsd;
  std::ostringstream lines;
  for (std::uint64_t clip = 0; clip < 10; ++clip) {
    const Waveform w = synthesize_speech(1000 + clip, 2.0);
    const Spectrogram feat = log_mel(stft(w, StftParams{}), 80);
    const Key key = generate_key(CipherKind::kShuffle, {clip + 7}, Mode::k2d, 3);
    KeyRecoveryOptions opts;
    opts.budget = 100000;
    opts.seed = clip;
    const auto r = evaluate_key_recovery(feat, key, opts);
    accuracy.push_back(*r.key_accuracy);
    lsd.push_back(*r.lsd_db);
    lines << "\n    clip " << clip << ": " << format_attack_report(r);
  }
  const double med = median(accuracy);
  const bool hill_ok = med < 1.0;
  return {exhaustive_ok && hill_ok,
          std::string("exhaustive M=2 ") + (exhaustive_ok ? "recovered all keys" : "missed a key") +
              "; hill-climb M=3 median key_accuracy " + fmt(med) + " (required < 1), median LSD " +
              fmt(median(lsd)) + " dB" + lines.str()};
}

Outcome determinism() {
  const std::string dir = testing::temp_path("det");
  std::vector<std::string> artifacts;
  auto run_pipeline = [&](const std::string& threads, const std::string& tag) {
    const std::string env = "KSC_THREADS=" + threads;
    const std::string p = dir + "_" + tag + "_";
    const std::vector<std::string> cmds = {
        "synth --seed 11 --duration 1.0 -o " + p + "s.wav",
        "features --preset asr3 -i " + p + "s.wav -o " + p + "f.spg",
        "features --kind linear -i " + p + "s.wav -o " + p + "lin.spg",
        "keygen --cipher shuffle --mode 2d --M 3 --seed 7 -o " + p + "k.key",
        "encrypt -k " + p + "k.key -i " + p + "f.spg -o " + p + "y.spg",
        "kernel-init --preset asr3 --d 16 --seed 3 -o " + p + "e.krn",
        "kernel-transform -k " + p + "k.key -i " + p + "e.krn -o " + p + "e2.krn",
        "embed --remainder passthrough -i " + p + "y.spg --kernel " + p + "e2.krn -o " + p + "y.emb",
        "verify --preset asr3 --seed 7 -i " + p + "s.wav -o " + p + "v.txt",
        "attack-phase --iterations 20 -i " + p + "lin.spg -o " + p + "r.wav",
        "attack-phase --method pghi -i " + p + "lin.spg -o " + p + "pg.wav",
        "attack-key --cipher shuffle --M 3 --budget 20000 --seed 5 -i " + p + "y.spg -o " + p +
            "a.txt --decrypted " + p + "d.spg",
    };
    for (const auto& cmd : cmds) {
      if (testing::run_cli(cmd, env) != 0) return std::string("command failed: ") + cmd;
    }
    std::string all;
    for (const char* f : {"s.wav", "f.spg", "lin.spg", "k.key", "y.spg", "e.krn", "e2.krn", "y.emb",
                          "v.txt", "r.wav", "pg.wav", "a.txt", "d.spg"}) {
      const std::string bytes = testing::read_text(p + f);
      if (bytes.empty()) return std::string("empty artifact ") + f;
      all += std::string(f) + ":" + std::to_string(bytes.size()) + ":" + bytes;
    }
    return all;
  };
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"1", "a"}, {"1", "b"}, {"2", "c"}, {"4", "d"}, {"8", "e"}};
  std::vector<std::string> outputs;
  for (const auto& [threads, tag] : runs) outputs.push_back(run_pipeline(threads, tag));
  bool same = outputs.front().find(':') != std::string::npos;
  for (const auto& o : outputs) same = same && o == outputs.front();
  return {same, same ? "13 artifacts byte-identical over 5 runs with KSC_THREADS=1,1,2,4,8"
                     : "artifacts differ or a run failed: " + outputs.front().substr(0, 120)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"commutation invariance", commutation},
      {"wrong-key degradation", wrong_key_degradation},
      {"round trip", round_trip},
      {"key space", key_space},
      {"presets", presets},
      {"phase-reconstruction attack", phase_attack},
      {"key-recovery attack", key_recovery},
      {"determinism", determinism},
  };
  bool all_pass = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::printf("criterion %zu (%s): %s - %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
