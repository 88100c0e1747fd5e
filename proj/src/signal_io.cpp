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

#include "ksc/formats.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ksc/error.hpp"

namespace ksc {
namespace {

class Writer {
 public:
  explicit Writer(const char* magic) { bytes_.insert(bytes_.end(), magic, magic + 4); }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u8(std::uint8_t v) { bytes_.push_back(static_cast<char>(v)); }
  void f64(double v) {
    const auto u = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
  }

  std::vector<char> take() { return std::move(bytes_); }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  Reader(const std::vector<char>& bytes, const char* magic) : bytes_(bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), magic, 4) != 0) {
      fail(ErrorCode::kFormat, std::string("bad magic, expected ") + magic);
    }
    pos_ = 4;
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= std::uint32_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  double f64() {
    need(8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) {
      u |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
    }
    pos_ += 8;
    return std::bit_cast<double>(u);
  }
  void expect_payload(std::uint64_t reals) {
    if (bytes_.size() - pos_ != reals * 8) {
      fail(ErrorCode::kFormat, "payload size does not match header: expected " +
                                   std::to_string(reals * 8) + " bytes, found " +
                                   std::to_string(bytes_.size() - pos_));
    }
  }

 private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size()) fail(ErrorCode::kFormat, "truncated file");
  }

  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

void write_params(Writer& w, std::size_t t, std::size_t f, const StftParams& p) {
  w.u32(static_cast<std::uint32_t>(t));
  w.u32(static_cast<std::uint32_t>(f));
  w.u32(p.sample_rate);
  w.u32(p.hop);
  w.u32(p.window_length);
  w.u32(p.fft_size);
}

StftParams read_params(Reader& r, std::uint32_t& t, std::uint32_t& f) {
  t = r.u32();
  f = r.u32();
  StftParams p;
  p.sample_rate = r.u32();
  p.hop = r.u32();
  p.window_length = r.u32();
  p.fft_size = r.u32();
  return p;
}

Mode mode_from_flag(std::uint8_t flag) {
  if (flag == 0) return Mode::k1d;
  if (flag == 1) return Mode::k2d;
  fail(ErrorCode::kFormat, "mode flag must be 0 (1d) or 1 (2d)");
}

}  // namespace

std::vector<char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::vector<char>& bytes, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

FileKind sniff_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() < 4) return FileKind::kUnknown;
  const std::string m(magic, 4);
  if (m == "SPG1") return FileKind::kSpectrogram;
  if (m == "STC1") return FileKind::kComplexSpectrogram;
  if (m == "KRN1") return FileKind::kKernel;
  if (m == "EMB1") return FileKind::kEmbedding;
  if (m == "RIFF") return FileKind::kWav;
  if (m == "KSC1") return FileKind::kKey;
  return FileKind::kUnknown;
}

std::vector<char> encode_spectrogram(const Spectrogram& spec) {
  Writer w("SPG1");
  write_params(w, spec.frames(), spec.channels(), spec.params);
  w.u8(static_cast<std::uint8_t>(spec.kind));
  for (double v : spec.values.values) w.f64(v);
  return w.take();
}

Spectrogram decode_spectrogram(const std::vector<char>& bytes) {
  Reader r(bytes, "SPG1");
  std::uint32_t t = 0;
  std::uint32_t f = 0;
  Spectrogram spec;
  spec.params = read_params(r, t, f);
  const std::uint8_t kind = r.u8();
  if (kind > 2) fail(ErrorCode::kFormat, "unknown spectrogram kind " + std::to_string(kind));
  spec.kind = static_cast<SpectrogramKind>(kind);
  if (t == 0 || f == 0) fail(ErrorCode::kFormat, "spectrogram has an empty dimension");
  r.expect_payload(std::uint64_t{t} * f);
  std::vector<double> values(std::size_t{t} * f);
  for (auto& v : values) v = r.f64();
  spec.values = Signal::matrix(t, f, std::move(values));
  return spec;
}

void write_spectrogram(const Spectrogram& spec, const std::string& path) {
  write_file_bytes(encode_spectrogram(spec), path);
}

Spectrogram read_spectrogram(const std::string& path) {
  return decode_spectrogram(read_file_bytes(path));
}

void write_complex_spectrogram(const ComplexSpectrogram& spec, const std::string& path) {
  Writer w("STC1");
  write_params(w, spec.frames, spec.bins, spec.params);
  w.u8(0);
  for (const auto& v : spec.values) {
    w.f64(v.real());
    w.f64(v.imag());
  }
  write_file_bytes(w.take(), path);
}

ComplexSpectrogram read_complex_spectrogram(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  Reader r(bytes, "STC1");
  std::uint32_t t = 0;
  std::uint32_t f = 0;
  ComplexSpectrogram spec;
  spec.params = read_params(r, t, f);
  r.u8();
  r.expect_payload(std::uint64_t{t} * f * 2);
  spec.frames = t;
  spec.bins = f;
  spec.values.resize(std::size_t{t} * f);
  for (auto& v : spec.values) {
    const double re = r.f64();
    const double im = r.f64();
    v = {re, im};
  }
  return spec;
}

std::vector<char> encode_kernel(const PatchEmbedKernel& kernel) {
  kernel.validate();
  Writer w("KRN1");
  w.u32(static_cast<std::uint32_t>(kernel.patch));
  w.u32(static_cast<std::uint32_t>(kernel.dim));
  w.u8(kernel.mode == Mode::k2d ? 1 : 0);
  for (double v : kernel.weights) w.f64(v);
  return w.take();
}

PatchEmbedKernel decode_kernel(const std::vector<char>& bytes) {
  Reader r(bytes, "KRN1");
  PatchEmbedKernel k;
  k.patch = r.u32();
  k.dim = r.u32();
  k.mode = mode_from_flag(r.u8());
  if (k.patch == 0 || k.dim == 0) fail(ErrorCode::kFormat, "kernel has P = 0 or d = 0");
  r.expect_payload(std::uint64_t{k.patch_length()} * k.dim);
  k.weights.resize(k.patch_length() * k.dim);
  for (auto& v : k.weights) v = r.f64();
  k.validate();
  return k;
}

void write_kernel(const PatchEmbedKernel& kernel, const std::string& path) {
  write_file_bytes(encode_kernel(kernel), path);
}

PatchEmbedKernel read_kernel(const std::string& path) {
  return decode_kernel(read_file_bytes(path));
}

void write_embedding(const Embedding& emb, const std::string& path) {
  Writer w("EMB1");
  w.u32(static_cast<std::uint32_t>(emb.rows));
  w.u32(static_cast<std::uint32_t>(emb.cols));
  w.u32(static_cast<std::uint32_t>(emb.dim));
  w.u8(emb.mode == Mode::k2d ? 1 : 0);
  for (double v : emb.values) w.f64(v);
  write_file_bytes(w.take(), path);
}

Embedding read_embedding(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  Reader r(bytes, "EMB1");
  Embedding e;
  e.rows = r.u32();
  e.cols = r.u32();
  e.dim = r.u32();
  e.mode = mode_from_flag(r.u8());
  r.expect_payload(std::uint64_t{e.rows} * e.cols * e.dim);
  e.values.resize(e.rows * e.cols * e.dim);
  for (auto& v : e.values) v = r.f64();
  return e;
}

}  // namespace ksc
