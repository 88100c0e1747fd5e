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

// ksc: command line front end for the block cipher toolkit.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ksc/attacks.hpp"
#include "ksc/cipher.hpp"
#include "ksc/dsp.hpp"
#include "ksc/error.hpp"
#include "ksc/formats.hpp"
#include "ksc/keys.hpp"
#include "ksc/metrics.hpp"
#include "ksc/patch_embed.hpp"
#include "ksc/presets.hpp"
#include "ksc/synth.hpp"
#include "ksc/wav.hpp"

namespace {

using namespace ksc;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitFormat = 4;
constexpr int kExitKeyMismatch = 5;
constexpr int kExitDimension = 6;
constexpr int kExitParameter = 7;
constexpr int kExitWrongCipher = 8;

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 ok, 1 internal error, 2 usage, 3 file I/O, 4 malformed input,\n"
    "5 key/data mismatch, 6 dimension or shape error, 7 invalid parameter,\n"
    "8 wrong cipher. Set KSC_THREADS to cap worker threads.";

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return kExitIo;
    case ErrorCode::kParse:
    case ErrorCode::kFormat: return kExitFormat;
    case ErrorCode::kKeyMismatch: return kExitKeyMismatch;
    case ErrorCode::kDimension:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kStructural: return kExitDimension;
    case ErrorCode::kInvalidParameter:
    case ErrorCode::kDegenerateRange:
    case ErrorCode::kUndefinedReference: return kExitParameter;
    case ErrorCode::kWrongCipher: return kExitWrongCipher;
  }
  return kExitInternal;
}

std::string num(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

RemainderPolicy parse_remainder(const std::string& text) {
  if (text == "strict") return RemainderPolicy::kStrict;
  if (text == "passthrough") return RemainderPolicy::kPassthrough;
  fail(ErrorCode::kParse, "remainder: expected strict or passthrough, got '" + text + "'");
}

// A 1d signal travels as WAV, a 2d one as SPG1.
struct Carrier {
  Signal signal;
  std::optional<Spectrogram> spectrogram;
  std::uint32_t sample_rate = 16000;
};

Carrier load_carrier(const std::string& path) {
  switch (sniff_file(path)) {
    case FileKind::kSpectrogram: {
      Carrier c;
      c.spectrogram = read_spectrogram(path);
      c.signal = c.spectrogram->values;
      c.sample_rate = c.spectrogram->params.sample_rate;
      return c;
    }
    case FileKind::kWav: {
      const auto wav = read_wav_detailed(path);
      if (wav.downmixed) std::cerr << "warning: '" << path << "' averaged to mono\n";
      return {wav.waveform.to_signal(), std::nullopt, wav.waveform.sample_rate};
    }
    default:
      fail(ErrorCode::kFormat, "'" + path + "' is neither a SPG1 spectrogram nor a WAV file");
  }
}

void store_carrier(const Carrier& like, const Signal& data, const std::string& path) {
  if (like.spectrogram) {
    Spectrogram out = *like.spectrogram;
    out.values = data;
    write_spectrogram(out, path);
  } else {
    write_wav(Waveform::from_signal(data, like.sample_rate), path, WavEncoding::kFloat32);
  }
}

StftParams stft_params(std::uint32_t window, std::uint32_t hop, std::uint32_t fft,
                       std::uint32_t rate) {
  StftParams p;
  p.window_length = window;
  p.hop = hop;
  p.fft_size = fft;
  p.sample_rate = rate;
  return p;
}

struct StftFlags {
  std::uint32_t window = 400;
  std::uint32_t hop = 160;
  std::uint32_t fft = 512;

  void attach(CLI::App* app) {
    app->add_option("--window", window, "window length in samples")->capture_default_str();
    app->add_option("--hop", hop, "hop in samples")->capture_default_str();
    app->add_option("--fft", fft, "FFT size")->capture_default_str();
  }
};

Spectrogram features_from(const ComplexSpectrogram& c, const std::string& kind, std::size_t n_mels) {
  if (kind == "linear") return magnitude(c);
  if (kind == "log") return log_magnitude(c);
  if (kind == "logmel") return log_mel(c, n_mels);
  fail(ErrorCode::kParse, "kind: expected linear, log or logmel, got '" + kind + "'");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  write_file_bytes({text.begin(), text.end()}, path);
}

// Incorrect-key scenario: seed + 1, + 2, ... until the key differs.
Key incorrect_key(CipherKind cipher, std::uint64_t seed, Mode mode, std::size_t m,
                  const Key& correct) {
  if (key_space_size(cipher, mode, m) < 2) {
    fail(ErrorCode::kInvalidParameter, "key space has a single key; no incorrect key exists");
  }
  for (std::uint64_t s = seed + 1;; ++s) {
    Key k = generate_key(cipher, {s}, mode, m);
    if (!(k == correct)) return k;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ksc: block-wise shuffling and flipping ciphers for speech data"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  // keygen
  std::string cipher_name = "shuffle";
  std::string mode_name = "2d";
  std::size_t block = 3;
  std::uint64_t seed = 0;
  std::string preset_name = "none";
  std::string out_path;
  std::string in_path;
  std::string key_path;
  std::string remainder_name = "passthrough";

  auto* keygen = app.add_subcommand("keygen", "generate a secret key file");
  keygen->add_option("--cipher", cipher_name, "shuffle or flip")->capture_default_str();
  keygen->add_option("--mode", mode_name, "1d or 2d")->capture_default_str();
  keygen->add_option("--M", block, "block size")->capture_default_str();
  keygen->add_option("--seed", seed, "64-bit seed")->capture_default_str();
  keygen->add_option("--preset", preset_name, "asr3, asv10 or none (overrides mode and M)");
  keygen->add_option("-o,--output", out_path, "key file")->required();

  auto* enc = app.add_subcommand("encrypt", "encrypt a spectrogram (SPG1) or waveform (WAV)");
  auto* dec = app.add_subcommand("decrypt", "decrypt a spectrogram (SPG1) or waveform (WAV)");
  for (auto* sub : {enc, dec}) {
    sub->add_option("-k,--key", key_path, "key file")->required();
    sub->add_option("-i,--input", in_path, "input file")->required();
    sub->add_option("-o,--output", out_path, "output file")->required();
    sub->add_option("--remainder", remainder_name, "strict or passthrough")->capture_default_str();
  }

  StftFlags stft_flags;
  auto* stft_cmd = app.add_subcommand("stft", "complex STFT of a WAV file (STC1)");
  stft_cmd->add_option("-i,--input", in_path, "WAV file")->required();
  stft_cmd->add_option("-o,--output", out_path, "STC1 file")->required();
  stft_flags.attach(stft_cmd);

  std::string kind_name = "logmel";
  std::size_t n_mels = 80;
  auto* features = app.add_subcommand("features", "magnitude, log magnitude or log-mel (SPG1)");
  features->add_option("-i,--input", in_path, "WAV or STC1 file")->required();
  features->add_option("-o,--output", out_path, "SPG1 file")->required();
  features->add_option("--kind", kind_name, "linear, log or logmel")->capture_default_str();
  features->add_option("--n-mels", n_mels, "mel channels")->capture_default_str();
  features->add_option("--preset", preset_name, "asr3 forces 80-dim log-mel");
  stft_flags.attach(features);

  auto* export_image = app.add_subcommand("export-image", "write a spectrogram as a PGM image");
  export_image->add_option("-i,--input", in_path, "SPG1 file")->required();
  export_image->add_option("-o,--output", out_path, "PGM file")->required();

  std::size_t patch = 3;
  std::size_t dim = 16;
  auto* kernel_init = app.add_subcommand("kernel-init", "random patch-embedding kernel (KRN1)");
  kernel_init->add_option("--mode", mode_name, "1d or 2d")->capture_default_str();
  kernel_init->add_option("--P", patch, "patch size")->capture_default_str();
  kernel_init->add_option("--d", dim, "output dimension")->capture_default_str();
  kernel_init->add_option("--seed", seed, "64-bit seed")->capture_default_str();
  kernel_init->add_option("--preset", preset_name, "asr3 or asv10 (overrides mode and P)");
  kernel_init->add_option("-o,--output", out_path, "KRN1 file")->required();

  auto* kernel_transform =
      app.add_subcommand("kernel-transform", "transform a kernel so it accepts encrypted input");
  kernel_transform->add_option("-k,--key", key_path, "key file")->required();
  kernel_transform->add_option("-i,--input", in_path, "KRN1 file")->required();
  kernel_transform->add_option("-o,--output", out_path, "KRN1 file")->required();

  std::string kernel_path;
  auto* embed_cmd = app.add_subcommand("embed", "apply a patch-embedding kernel (EMB1)");
  embed_cmd->add_option("-i,--input", in_path, "SPG1 or WAV file")->required();
  embed_cmd->add_option("--kernel", kernel_path, "KRN1 file")->required();
  embed_cmd->add_option("-o,--output", out_path, "EMB1 file")->required();
  embed_cmd->add_option("--remainder", remainder_name, "strict or passthrough")->capture_default_str();

  std::string verify_cipher = "both";
  auto* verify = app.add_subcommand("verify", "plain / correct key / incorrect key comparison");
  verify->add_option("-i,--input", in_path, "speech WAV file")->required();
  verify->add_option("--preset", preset_name, "asr3 or asv10")->capture_default_str();
  verify->add_option("--mode", mode_name, "1d or 2d (without preset)")->capture_default_str();
  verify->add_option("--M", block, "block size (without preset)")->capture_default_str();
  verify->add_option("--cipher", verify_cipher, "shuffle, flip or both")->capture_default_str();
  verify->add_option("--d", dim, "embedding dimension of the random kernel")->capture_default_str();
  verify->add_option("--kernel", kernel_path, "KRN1 file instead of a random kernel");
  verify->add_option("--seed", seed, "key and kernel seed")->capture_default_str();
  verify->add_option("-o,--output", out_path, "report file (default stdout)");
  stft_flags.attach(verify);

  std::string method_name = "griffin_lim";
  std::size_t iterations = 100;
  double threshold = 1e-7;
  std::string reference_path;
  auto* attack_phase =
      app.add_subcommand("attack-phase", "reconstruct a waveform from a magnitude spectrogram");
  attack_phase->add_option("-i,--input", in_path, "SPG1 (linear or log magnitude)")->required();
  attack_phase->add_option("-o,--output", out_path, "WAV file")->required();
  attack_phase->add_option("--method", method_name, "griffin_lim or pghi")->capture_default_str();
  attack_phase->add_option("--iterations", iterations, "Griffin-Lim iterations")->capture_default_str();
  attack_phase->add_option("--threshold", threshold, "PGHI relative threshold")->capture_default_str();
  attack_phase->add_option("--seed", seed, "seed for random phase fill")->capture_default_str();
  attack_phase->add_option("--reference", reference_path, "original WAV for lsd/snr");

  std::uint64_t budget = 100000;
  std::string truth_path;
  std::string decrypted_path;
  auto* attack_key = app.add_subcommand("attack-key", "ciphertext-only key search (known M)");
  attack_key->add_option("-i,--input", in_path, "encrypted SPG1")->required();
  attack_key->add_option("--cipher", cipher_name, "shuffle or flip")->capture_default_str();
  attack_key->add_option("--M", block, "block size")->capture_default_str();
  attack_key->add_option("--budget", budget, "candidate evaluations")->capture_default_str();
  attack_key->add_option("--seed", seed, "restart seed")->capture_default_str();
  attack_key->add_option("--truth", truth_path, "true key file (enables accuracy)");
  attack_key->add_option("--reference", reference_path, "plain SPG1 (enables lsd_db)");
  attack_key->add_option("--decrypted", decrypted_path, "write the trial decryption (SPG1)");
  attack_key->add_option("-o,--output", out_path, "report file (default stdout)");

  std::string a_path;
  std::string b_path;
  auto* metrics_cmd = app.add_subcommand("metrics", "compare two WAV or two SPG1 files");
  metrics_cmd->add_option("-a,--reference", a_path, "reference file")->required();
  metrics_cmd->add_option("-b,--test", b_path, "test file")->required();
  metrics_cmd->add_option("-o,--output", out_path, "report file (default stdout)");
  stft_flags.attach(metrics_cmd);

  double duration = 2.0;
  std::uint32_t rate = 16000;
  bool pcm16 = false;
  auto* synth = app.add_subcommand("synth", "write a synthetic speech-like test utterance");
  synth->add_option("--seed", seed, "64-bit seed")->capture_default_str();
  synth->add_option("--duration", duration, "seconds")->capture_default_str();
  synth->add_option("--rate", rate, "sample rate")->capture_default_str();
  synth->add_flag("--pcm16", pcm16, "write 16-bit PCM instead of 32-bit float");
  synth->add_option("-o,--output", out_path, "WAV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (keygen->parsed()) {
      Mode mode = parse_mode(mode_name);
      if (auto preset = find_preset(preset_name)) {
        mode = preset->mode;
        block = preset->block_size;
      }
      write_key_file(generate_key(parse_cipher(cipher_name), {seed}, mode, block), out_path);
    } else if (enc->parsed() || dec->parsed()) {
      const Key key = read_key_file(key_path);
      const Carrier carrier = load_carrier(in_path);
      const BlockSpec spec = spec_for(key, parse_remainder(remainder_name));
      if (enc->parsed()) {
        store_carrier(carrier, encrypt(carrier.signal, key, spec).data, out_path);
      } else {
        const EncryptedSignal y{carrier.signal, cipher_of(key), spec, key_fingerprint(key)};
        store_carrier(carrier, decrypt(y, key), out_path);
      }
    } else if (stft_cmd->parsed()) {
      const Waveform w = read_wav(in_path);
      write_complex_spectrogram(
          stft(w, stft_params(stft_flags.window, stft_flags.hop, stft_flags.fft, w.sample_rate)),
          out_path);
    } else if (features->parsed()) {
      if (auto preset = find_preset(preset_name)) {
        if (!preset->feature) fail(ErrorCode::kInvalidParameter, "preset has no spectrogram feature");
        kind_name = "logmel";
        n_mels = preset->n_mels;
      }
      ComplexSpectrogram c;
      if (sniff_file(in_path) == FileKind::kComplexSpectrogram) {
        c = read_complex_spectrogram(in_path);
      } else {
        const Waveform w = read_wav(in_path);
        c = stft(w, stft_params(stft_flags.window, stft_flags.hop, stft_flags.fft, w.sample_rate));
      }
      write_spectrogram(features_from(c, kind_name, n_mels), out_path);
    } else if (export_image->parsed()) {
      export_spectrogram_image(read_spectrogram(in_path), out_path);
    } else if (kernel_init->parsed()) {
      Mode mode = parse_mode(mode_name);
      if (auto preset = find_preset(preset_name)) {
        mode = preset->mode;
        patch = preset->block_size;
      }
      write_kernel(random_kernel(seed, mode, patch, dim), out_path);
    } else if (kernel_transform->parsed()) {
      write_kernel(transform_kernel(read_kernel(in_path), read_key_file(key_path)), out_path);
    } else if (embed_cmd->parsed()) {
      const Carrier carrier = load_carrier(in_path);
      write_embedding(embed(carrier.signal, read_kernel(kernel_path), parse_remainder(remainder_name)),
                      out_path);
    } else if (verify->parsed()) {
      Mode mode = parse_mode(mode_name);
      std::optional<Preset> preset = find_preset(preset_name);
      if (preset) {
        mode = preset->mode;
        block = preset->block_size;
      }
      const Waveform w = read_wav(in_path);
      Signal x = w.to_signal();
      if (mode == Mode::k2d) {
        const auto c =
            stft(w, stft_params(stft_flags.window, stft_flags.hop, stft_flags.fft, w.sample_rate));
        x = log_mel(c, preset ? preset->n_mels : n_mels).values;
      }
      const PatchEmbedKernel kernel =
          kernel_path.empty() ? random_kernel(seed, mode, block, dim) : read_kernel(kernel_path);
      if (kernel.mode != mode || kernel.patch != block) {
        fail(ErrorCode::kKeyMismatch, "kernel does not match the configured mode and block size");
      }
      std::ostringstream report;
      for (CipherKind cipher : {CipherKind::kShuffle, CipherKind::kFlip}) {
        if (verify_cipher != "both" && parse_cipher(verify_cipher) != cipher) continue;
        const Key correct = generate_key(cipher, {seed}, mode, block);
        const Key wrong = incorrect_key(cipher, seed, mode, block, correct);
        const VerifyReport r = verify_scenarios(x, kernel, correct, wrong);
        report << "cipher=" << to_string(cipher) << " mode=" << to_string(mode)
               << " P=" << r.patch << " d=" << r.dim
               << " max_rel_diff_correct=" << num(r.max_rel_diff_correct())
               << " mean_rel_diff_incorrect=" << num(r.mean_rel_diff_incorrect())
               << " mean_rel_diff_plain=" << num(r.mean_rel_diff_plain())
               << " degenerate_kernel=" << (r.degenerate_kernel ? 1 : 0) << '\n';
      }
      emit(report.str(), out_path);
    } else if (attack_phase->parsed()) {
      Spectrogram s = read_spectrogram(in_path);
      if (s.kind == SpectrogramKind::kLogMagnitude) s = linear_from_log_magnitude(s);
      PhaseReconConfig cfg;
      cfg.method = parse_phase_method(method_name);
      cfg.iterations = iterations;
      cfg.relative_threshold = threshold;
      cfg.seed = seed;
      const Waveform recon = phase_reconstruct(s, cfg);
      write_wav(recon, out_path, WavEncoding::kFloat32);
      if (!reference_path.empty()) {
        const auto m = evaluate_reconstruction(read_wav(reference_path), recon, s.params);
        std::cout << "lsd_db=" << num(m.lsd_db)
                  << " snr_db=" << (m.snr_db ? num(*m.snr_db) : std::string("na")) << '\n';
      }
    } else if (attack_key->parsed()) {
      const Spectrogram encrypted = read_spectrogram(in_path);
      const CipherKind cipher = parse_cipher(cipher_name);
      KeyRecoveryOptions opts;
      opts.budget = budget;
      opts.seed = seed;
      if (!truth_path.empty()) opts.truth = read_key_file(truth_path);
      const Signal scaled = scale_to_byte_range(encrypted.values, nullptr);
      AttackReport report = key_recovery_attack(scaled, cipher, block, opts);
      const EncryptedSignal y{encrypted.values, cipher,
                              {Mode::k2d, block, RemainderPolicy::kPassthrough}, ""};
      Spectrogram recovered = encrypted;
      recovered.values = decrypt(y, *report.recovered_key);
      if (!reference_path.empty()) {
        const Spectrogram plain = read_spectrogram(reference_path);
        report.lsd_db = lsd_db(magnitude_view(plain), magnitude_view(recovered));
      }
      if (!decrypted_path.empty()) write_spectrogram(recovered, decrypted_path);
      emit(format_attack_report(report) + "\n", out_path);
    } else if (metrics_cmd->parsed()) {
      const FileKind ka = sniff_file(a_path);
      const FileKind kb = sniff_file(b_path);
      std::ostringstream line;
      if (ka == FileKind::kWav && kb == FileKind::kWav) {
        const Waveform a = read_wav(a_path);
        const Waveform b = read_wav(b_path);
        const auto m = evaluate_reconstruction(
            a, b, stft_params(stft_flags.window, stft_flags.hop, stft_flags.fft, a.sample_rate));
        line << "lsd_db=" << num(m.lsd_db)
             << " snr_db=" << (m.snr_db ? num(*m.snr_db) : std::string("na")) << '\n';
      } else if (ka == FileKind::kSpectrogram && kb == FileKind::kSpectrogram) {
        const Spectrogram a = read_spectrogram(a_path);
        const Spectrogram b = read_spectrogram(b_path);
        const DiffStats d = tensor_diff(a.values.values, b.values.values);
        line << "max_rel=" << num(d.max_rel) << " mean_rel=" << num(d.mean_rel)
             << " max_abs=" << num(d.max_abs) << '\n';
      } else {
        fail(ErrorCode::kFormat, "metrics needs two WAV files or two SPG1 files");
      }
      emit(line.str(), out_path);
    } else if (synth->parsed()) {
      write_wav(synthesize_speech(seed, duration, rate), out_path,
                pcm16 ? WavEncoding::kPcm16 : WavEncoding::kFloat32);
    }
  } catch (const Error& e) {
    std::cerr << "ksc: " << error_code_name(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "ksc: internal: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
