// Copyright 2026 The SCA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sca/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace sca::io {

namespace {

constexpr char kMatrixMagic[4] = {'S', 'C', 'A', 'M'};
constexpr char kCodeMagic[4] = {'S', 'C', 'A', 'C'};
constexpr std::size_t kHeaderSize = 4 + 4 + 8 + 8;

class Writer {
 public:
  explicit Writer(Bytes& out) : out_(out) {}

  void magic(const char (&m)[4]) {
    for (char c : m) out_.push_back(static_cast<std::uint8_t>(c));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

 private:
  Bytes& out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, const char* what) : bytes_(bytes), what_(what) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void need(std::size_t n, const std::string& item) const {
    if (remaining() < n) {
      throw Error(Errc::CorruptFile,
                  std::string(what_) + " truncated at byte offset " + std::to_string(pos_) +
                      " reading " + item + ": expected at least " + std::to_string(pos_ + n) +
                      " bytes, file has " + std::to_string(bytes_.size()));
    }
  }

  void magic(const char (&m)[4]) {
    need(4, "magic");
    if (std::memcmp(bytes_.data(), m, 4) != 0) {
      fail("bad magic, expected \"" + std::string(m, 4) + "\"");
    }
    pos_ += 4;
  }
  std::uint32_t u32(const std::string& item) {
    need(4, item);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const std::string& item) {
    need(8, item);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64(const std::string& item) { return std::bit_cast<double>(u64(item)); }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw Error(Errc::CorruptFile,
                std::string(what_) + " corrupt at byte offset " + std::to_string(at) + ": " + msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

  void version() {
    const std::size_t at = pos_;
    const auto v = u32("version");
    if (v != kFormatVersion) fail("unsupported version " + std::to_string(v), at);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  const char* what_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes encode_matrix(const MatrixXd& m) {
  Bytes out;
  out.reserve(kHeaderSize + 8 * std::size_t(m.size()));
  Writer w(out);
  w.magic(kMatrixMagic);
  w.u32(kFormatVersion);
  w.u64(std::uint64_t(m.rows()));
  w.u64(std::uint64_t(m.cols()));
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) w.f64(m(i, j));
  return out;
}

MatrixXd decode_matrix(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "matrix file");
  r.magic(kMatrixMagic);
  r.version();
  const auto rows = r.u64("n_dims");
  const auto cols = r.u64("n_points");
  constexpr auto kMaxEntries = std::numeric_limits<std::uint64_t>::max() / 16;
  if (cols != 0 && rows > kMaxEntries / cols) r.fail("dimensions overflow", 8);
  const std::uint64_t payload = 8 * rows * cols;
  if (r.remaining() != payload) {
    throw Error(Errc::CorruptFile,
                "matrix file payload length mismatch at byte offset " + std::to_string(r.offset()) +
                    ": expected " + std::to_string(kHeaderSize + payload) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
  MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) m(i, j) = r.f64("value");
  return m;
}

Bytes encode_codes(const CodeFile& file) {
  Bytes out;
  Writer w(out);
  w.magic(kCodeMagic);
  w.u32(kFormatVersion);
  w.u64(std::uint64_t(file.code_len));
  w.u64(std::uint64_t(file.codes.size()));
  for (const auto& code : file.codes) {
    require(code.length() == file.code_len, Errc::DimensionMismatch,
            "code length differs from file code length");
    w.u32(std::uint32_t(code.nnz()));
    for (const auto& e : code.entries()) {
      w.u32(std::uint32_t(e.index));
      w.f64(e.value);
    }
  }
  return out;
}

CodeFile decode_codes(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "sparse code file");
  r.magic(kCodeMagic);
  r.version();
  CodeFile file;
  const auto code_len = r.u64("L");
  if (code_len > std::numeric_limits<std::uint32_t>::max()) r.fail("L exceeds the u32 index range", 8);
  file.code_len = Index(code_len);
  const auto count = r.u64("count");
  // Every code costs at least its 4-byte nnz field.
  r.need(std::size_t(std::min<std::uint64_t>(count, r.remaining() + 1)) * 4, "code headers");
  file.codes.reserve(std::size_t(count));
  for (std::uint64_t c = 0; c < count; ++c) {
    const std::string tag = "code " + std::to_string(c);
    const std::size_t nnz_at = r.offset();
    const auto nnz = r.u32(tag + " nnz");
    if (nnz > code_len) r.fail(tag + " has nnz " + std::to_string(nnz) + " > L", nnz_at);
    r.need(std::size_t(nnz) * 12, tag + " entries");
    std::vector<Entry<double>> entries;
    entries.reserve(nnz);
    for (std::uint32_t k = 0; k < nnz; ++k) {
      const std::size_t at = r.offset();
      const auto index = r.u32(tag + " index");
      const double value = r.f64(tag + " value");
      if (index >= code_len) r.fail(tag + " index " + std::to_string(index) + " >= L", at);
      if (!entries.empty() && Index(index) <= entries.back().index)
        r.fail(tag + " indices not strictly increasing", at);
      if (value == 0.0 || !std::isfinite(value)) r.fail(tag + " has a zero or non-finite value", at + 4);
      entries.push_back({Index(index), value});
    }
    file.codes.emplace_back(file.code_len, std::move(entries));
  }
  if (r.remaining() != 0) {
    r.fail(std::to_string(r.remaining()) + " trailing bytes after " + std::to_string(count) + " codes");
  }
  return file;
}

Bytes read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string() + " for reading");
  Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::Io, "read error on " + path.string());
  return out;
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw Error(Errc::Io, "write error on " + path.string());
}

MatrixXd read_matrix_file(const std::filesystem::path& path) { return decode_matrix(read_bytes(path)); }

void write_matrix_file(const std::filesystem::path& path, const MatrixXd& m) {
  write_bytes(path, encode_matrix(m));
}

CodeFile read_code_file(const std::filesystem::path& path) { return decode_codes(read_bytes(path)); }

void write_code_file(const std::filesystem::path& path, const CodeFile& file) {
  write_bytes(path, encode_codes(file));
}

}  // namespace sca::io
