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

// Binary file formats, all little-endian.
//
// Matrix file:
//   "SCAM" | version u32 | n_dims u64 | n_points u64 | n_dims*n_points f64,
//   column-major.
//
// Sparse code file:
//   "SCAC" | version u32 | L u64 | count u64 |
//   count x ( nnz u32 | nnz x (index u32, value f64) ),
//   indices strictly increasing and < L within each code.
//
// A transform is stored as a matrix file holding W (n_dims = L, n_points = N);
// a decoder as a matrix file holding R (n_dims = N, n_points = L).

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sca/core.hpp"
#include "sca/sparse_code.hpp"

namespace sca::io {

inline constexpr std::uint32_t kFormatVersion = 1;

using Bytes = std::vector<std::uint8_t>;

Bytes encode_matrix(const MatrixXd& m);
MatrixXd decode_matrix(std::span<const std::uint8_t> bytes);

struct CodeFile {
  Index code_len = 0;
  std::vector<SparseCode<double>> codes;
};

Bytes encode_codes(const CodeFile& file);
CodeFile decode_codes(std::span<const std::uint8_t> bytes);

Bytes read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

MatrixXd read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const MatrixXd& m);

CodeFile read_code_file(const std::filesystem::path& path);
void write_code_file(const std::filesystem::path& path, const CodeFile& file);

}  // namespace sca::io
