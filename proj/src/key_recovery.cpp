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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "ksc/attacks.hpp"
#include "ksc/blocking.hpp"
#include "ksc/cipher.hpp"
#include "ksc/error.hpp"
#include "ksc/metrics.hpp"

namespace ksc {
namespace {

constexpr double kMidLevel = 127.5;

// Neighbouring block positions (p, q). `table` selects which pair sum the
// term reads: 0 inside one block, 1 across a frequency border (q in the
// block to the right), 2 across a time border (q in the block below).
struct Adjacency {
  std::size_t p;
  std::size_t q;
  int table;
};

std::vector<Adjacency> adjacencies(std::size_t m, std::size_t grid_rows, std::size_t grid_cols) {
  std::vector<Adjacency> out;
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t f = 0; f < m; ++f) {
      if (f + 1 < m) out.push_back({t * m + f, t * m + f + 1, 0});
      if (t + 1 < m) out.push_back({t * m + f, (t + 1) * m + f, 0});
    }
  }
  if (grid_cols > 1) {
    for (std::size_t t = 0; t < m; ++t) out.push_back({t * m + m - 1, t * m, 1});
  }
  if (grid_rows > 1) {
    for (std::size_t f = 0; f < m; ++f) out.push_back({(m - 1) * m + f, f, 2});
  }
  return out;
}

// Pairwise sums over all blocks: sum |a_b[x] - sign * c_b'[y]| for the three
// neighbour relations, sign = +1 (same) and -1 (opposite).
class PairTables {
 public:
  PairTables(const BlockGrid& grid, double offset) : len_(grid.spec.block_length()) {
    for (auto& t : same_) t.assign(len_ * len_, 0.0);
    for (auto& t : opposite_) t.assign(len_ * len_, 0.0);
    column_sums_.assign(len_, 0.0);
    std::vector<double> a(len_);
    std::vector<double> c(len_);
    auto load = [&](std::size_t b, std::vector<double>& dst) {
      const auto blk = grid.block(b);
      for (std::size_t i = 0; i < len_; ++i) dst[i] = blk[i] - offset;
    };
    auto accumulate = [&](int table) {
      for (std::size_t x = 0; x < len_; ++x) {
        for (std::size_t y = 0; y < len_; ++y) {
          same_[table][x * len_ + y] += std::abs(a[x] - c[y]);
          opposite_[table][x * len_ + y] += std::abs(a[x] + c[y]);
        }
      }
    };
    for (std::size_t u = 0; u < grid.grid_rows; ++u) {
      for (std::size_t v = 0; v < grid.grid_cols; ++v) {
        const std::size_t b = u * grid.grid_cols + v;
        load(b, a);
        for (std::size_t i = 0; i < len_; ++i) column_sums_[i] += a[i];
        c = a;
        accumulate(0);
        if (v + 1 < grid.grid_cols) {
          load(b + 1, c);
          accumulate(1);
        }
        if (u + 1 < grid.grid_rows) {
          load(b + grid.grid_cols, c);
          accumulate(2);
        }
      }
    }
  }

  double same(int table, std::size_t x, std::size_t y) const { return same_[table][x * len_ + y]; }
  double opposite(int table, std::size_t x, std::size_t y) const {
    return opposite_[table][x * len_ + y];
  }
  double column_sum(std::size_t i) const { return column_sums_[i]; }

 private:
  std::size_t len_;
  std::vector<double> same_[3];
  std::vector<double> opposite_[3];
  std::vector<double> column_sums_;
};

// Scores are compared as (objective, -prior, key) lexicographically.
struct Score {
  double objective = std::numeric_limits<double>::infinity();
  double prior = 0.0;
};

template <typename Entries>
bool better(const Score& a, const Entries& ka, const Score& b, const Entries& kb) {
  if (a.objective != b.objective) return a.objective < b.objective;
  if (a.prior != b.prior) return a.prior > b.prior;
  return ka < kb;
}

class ShuffleSearch {
 public:
  ShuffleSearch(const BlockGrid& grid, std::size_t m)
      : len_(m * m), tables_(grid, 0.0), adj_(adjacencies(m, grid.grid_rows, grid.grid_cols)) {}

  // key holds 1-based K_s entries. Since X'(i) = X(K(i)), the trial
  // decryption reads plain cell p from the encrypted cell i with K(i) = p.
  double score(const std::vector<std::uint32_t>& key) {
    ++evaluations;
    for (std::size_t i = 0; i < len_; ++i) source_[key[i] - 1] = i;
    double total = 0.0;
    for (const auto& a : adj_) total += tables_.same(a.table, source_[a.p], source_[a.q]);
    return total;
  }

  std::size_t length() const { return len_; }

  std::uint64_t evaluations = 0;

 private:
  std::size_t len_;
  PairTables tables_;
  std::vector<Adjacency> adj_;
  std::vector<std::size_t> source_ = std::vector<std::size_t>(len_);
};

class FlipSearch {
 public:
  FlipSearch(const BlockGrid& grid, std::size_t m)
      : len_(m * m), tables_(grid, kMidLevel), adj_(adjacencies(m, grid.grid_rows, grid.grid_cols)) {}

  Score score(const std::vector<std::uint8_t>& bits) {
    ++evaluations;
    Score s;
    s.objective = 0.0;
    for (const auto& a : adj_) {
      s.objective += bits[a.p] == bits[a.q] ? tables_.same(a.table, a.p, a.q)
                                            : tables_.opposite(a.table, a.p, a.q);
    }
    for (std::size_t i = 0; i < len_; ++i) {
      s.prior += bits[i] ? -tables_.column_sum(i) : tables_.column_sum(i);
    }
    return s;
  }

  std::size_t length() const { return len_; }

  std::uint64_t evaluations = 0;

 private:
  std::size_t len_;
  PairTables tables_;
  std::vector<Adjacency> adj_;
};

template <typename Entries>
struct Best {
  Score score;
  Entries key;
  bool set = false;

  void offer(const Score& s, const Entries& k) {
    if (!set || better(s, k, score, key)) {
      score = s;
      key = k;
      set = true;
    }
  }
};

AttackReport attack_shuffle(const BlockGrid& grid, std::size_t m,
                            const KeyRecoveryOptions& options) {
  ShuffleSearch search(grid, m);
  const std::size_t len = search.length();
  Best<std::vector<std::uint32_t>> best;
  std::vector<std::uint32_t> key(len);
  std::iota(key.begin(), key.end(), 1u);

  const auto space = key_space_size(CipherKind::kShuffle, Mode::k2d, m);
  AttackReport report;
  if (space <= options.budget) {
    report.exhaustive = true;
    do {
      best.offer({search.score(key), 0.0}, key);
    } while (std::next_permutation(key.begin(), key.end()));
  } else {
    SplitMix64 rng(options.seed);
    bool first = true;
    while (search.evaluations < options.budget) {
      if (first && options.initial) {
        key = std::get<ShuffleKey>(*options.initial).indices();
      } else if (!first) {
        std::iota(key.begin(), key.end(), 1u);
        for (std::size_t i = len - 1; i > 0; --i) std::swap(key[i], key[rng.uniform_below(i + 1)]);
      }
      first = false;
      double current = search.score(key);
      best.offer({current, 0.0}, key);
      bool improved = true;
      while (improved && search.evaluations < options.budget) {
        improved = false;
        for (std::size_t i = 0; i < len && !improved; ++i) {
          for (std::size_t j = i + 1; j < len && !improved; ++j) {
            if (search.evaluations >= options.budget) break;
            std::swap(key[i], key[j]);
            const double s = search.score(key);
            best.offer({s, 0.0}, key);
            if (s < current) {
              current = s;
              improved = true;
            } else {
              std::swap(key[i], key[j]);
            }
          }
        }
      }
    }
  }
  report.candidates = search.evaluations;
  report.objective = best.score.objective;
  report.recovered_key = ShuffleKey(Mode::k2d, m, best.key);
  return report;
}

AttackReport attack_flip(const BlockGrid& grid, std::size_t m, const KeyRecoveryOptions& options) {
  FlipSearch search(grid, m);
  const std::size_t len = search.length();
  Best<std::vector<std::uint8_t>> best;
  std::vector<std::uint8_t> bits(len, 0);

  const auto space = key_space_size(CipherKind::kFlip, Mode::k2d, m);
  AttackReport report;
  if (space <= options.budget) {
    report.exhaustive = true;
    // Counting in binary with bit 0 as the most significant digit visits the
    // keys in lexicographic order.
    const std::uint64_t count = std::uint64_t{1} << len;
    for (std::uint64_t code = 0; code < count; ++code) {
      for (std::size_t i = 0; i < len; ++i) bits[i] = (code >> (len - 1 - i)) & 1u;
      best.offer(search.score(bits), bits);
    }
  } else {
    SplitMix64 rng(options.seed);
    bool first = true;
    while (search.evaluations < options.budget) {
      if (first && options.initial) {
        bits = std::get<FlipKey>(*options.initial).bits();
      } else if (!first) {
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next() & 1u);
      }
      first = false;
      Score current = search.score(bits);
      best.offer(current, bits);
      bool improved = true;
      while (improved && search.evaluations < options.budget) {
        improved = false;
        for (std::size_t i = 0; i < len && search.evaluations < options.budget; ++i) {
          bits[i] ^= 1u;
          const Score s = search.score(bits);
          best.offer(s, bits);
          if (s.objective < current.objective ||
              (s.objective == current.objective && s.prior > current.prior)) {
            current = s;
            improved = true;
            break;
          }
          bits[i] ^= 1u;
        }
      }
    }
  }
  report.candidates = search.evaluations;
  report.objective = best.score.objective;
  report.recovered_key = FlipKey(Mode::k2d, m, best.key);
  return report;
}

BlockGrid attack_grid(const Signal& scaled, std::size_t block_size) {
  if (scaled.mode != Mode::k2d) {
    fail(ErrorCode::kInvalidParameter, "key recovery works on 2d spectrograms only");
  }
  if (block_size == 0 || scaled.rows < block_size || scaled.cols < block_size) {
    fail(ErrorCode::kInvalidParameter, "spectrogram is smaller than one block");
  }
  return partition(scaled, {Mode::k2d, block_size, RemainderPolicy::kPassthrough});
}

}  // namespace

double key_accuracy(const Key& recovered, const Key& truth) {
  if (cipher_of(recovered) != cipher_of(truth) ||
      block_size_of(recovered) != block_size_of(truth) || mode_of(recovered) != mode_of(truth)) {
    fail(ErrorCode::kKeyMismatch, "recovered and true keys are not comparable");
  }
  std::size_t hits = 0;
  std::size_t total = 0;
  if (const auto* r = std::get_if<ShuffleKey>(&recovered)) {
    const auto& t = std::get<ShuffleKey>(truth);
    total = r->size();
    for (std::size_t i = 0; i < total; ++i) hits += r->indices()[i] == t.indices()[i];
  } else {
    const auto& r2 = std::get<FlipKey>(recovered);
    const auto& t = std::get<FlipKey>(truth);
    total = r2.size();
    for (std::size_t i = 0; i < total; ++i) hits += r2.bits()[i] == t.bits()[i];
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

double key_recovery_objective(const Signal& scaled, const Key& candidate) {
  const std::size_t m = block_size_of(candidate);
  if (mode_of(candidate) != Mode::k2d) {
    fail(ErrorCode::kInvalidParameter, "key recovery works on 2d keys only");
  }
  const BlockGrid grid = attack_grid(scaled, m);
  if (const auto* k = std::get_if<ShuffleKey>(&candidate)) {
    ShuffleSearch search(grid, m);
    return search.score(k->indices());
  }
  FlipSearch search(grid, m);
  return search.score(std::get<FlipKey>(candidate).bits()).objective;
}

AttackReport key_recovery_attack(const Signal& scaled, CipherKind cipher, std::size_t block_size,
                                 const KeyRecoveryOptions& options) {
  if (options.budget < 1) fail(ErrorCode::kInvalidParameter, "attack budget must be >= 1");
  const BlockGrid grid = attack_grid(scaled, block_size);
  for (const auto* k : {&options.truth, &options.initial}) {
    if (*k && (cipher_of(**k) != cipher || block_size_of(**k) != block_size ||
               mode_of(**k) != Mode::k2d)) {
      fail(ErrorCode::kKeyMismatch, "reference key does not match the attacked cipher");
    }
  }
  AttackReport report = cipher == CipherKind::kShuffle ? attack_shuffle(grid, block_size, options)
                                                       : attack_flip(grid, block_size, options);
  if (options.truth) report.key_accuracy = key_accuracy(*report.recovered_key, *options.truth);
  return report;
}

AttackReport evaluate_key_recovery(const Spectrogram& plain, const Key& key,
                                   const KeyRecoveryOptions& options, Spectrogram* decrypted) {
  const BlockSpec spec = spec_for(key, RemainderPolicy::kPassthrough);
  const EncryptedSignal encrypted = encrypt(plain.values, key, spec);
  const Signal scaled = scale_to_byte_range(encrypted.data, nullptr);

  KeyRecoveryOptions opts = options;
  if (!opts.truth) opts.truth = key;
  AttackReport report = key_recovery_attack(scaled, cipher_of(key), block_size_of(key), opts);

  Spectrogram recovered = plain;
  recovered.values = decrypt(encrypted, *report.recovered_key);
  report.lsd_db = lsd_db(magnitude_view(plain), magnitude_view(recovered));
  if (decrypted) *decrypted = std::move(recovered);
  return report;
}

std::string format_attack_report(const AttackReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "key=";
  if (!report.recovered_key) {
    out << "na";
  } else if (const auto* k = std::get_if<ShuffleKey>(&*report.recovered_key)) {
    for (std::size_t i = 0; i < k->size(); ++i) out << (i ? "," : "") << k->indices()[i];
  } else {
    const auto& f = std::get<FlipKey>(*report.recovered_key);
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << int{f.bits()[i]};
  }
  auto opt = [&out](const std::optional<double>& v) {
    if (v) {
      out << *v;
    } else {
      out << "na";
    }
  };
  out << " accuracy=";
  opt(report.key_accuracy);
  out << " lsd_db=";
  opt(report.lsd_db);
  out << " candidates=" << report.candidates;
  out << " search=" << (report.exhaustive ? "exhaustive" : "hill_climb");
  out << " objective=" << report.objective;
  return out.str();
}

}  // namespace ksc
