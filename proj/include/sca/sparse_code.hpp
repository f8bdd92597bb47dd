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

#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "sca/core.hpp"

namespace sca {

template <typename Scalar>
struct Entry {
  Index index;
  Scalar value;

  bool operator==(const Entry&) const = default;
};

// Sorted support of a code; the shared secret of the scheme.
using Support = std::vector<Index>;

/// Length-L vector stored as a strictly increasing list of (index, value)
/// pairs with no explicit zeros.
template <typename Scalar>
class SparseCode {
 public:
  using Scalar_t = Scalar;

  SparseCode() = default;
  explicit SparseCode(Index length) : length_(length) {
    require(length >= 0, Errc::InvalidArgument, "negative code length");
  }
  SparseCode(Index length, std::vector<Entry<Scalar>> entries)
      : length_(length), entries_(std::move(entries)) {
    validate();
  }

  static SparseCode from_dense(const Eigen::Ref<const Vector<Scalar>>& dense) {
    SparseCode code(dense.size());
    for (Index l = 0; l < dense.size(); ++l) {
      if (dense[l] != Scalar(0)) code.entries_.push_back({l, dense[l]});
    }
    return code;
  }

  Index length() const noexcept { return length_; }
  Index nnz() const noexcept { return static_cast<Index>(entries_.size()); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry<Scalar>>& entries() const noexcept { return entries_; }

  Support support() const {
    Support s;
    s.reserve(entries_.size());
    for (const auto& e : entries_) s.push_back(e.index);
    return s;
  }

  Vector<Scalar> to_dense() const {
    Vector<Scalar> dense = Vector<Scalar>::Zero(length_);
    for (const auto& e : entries_) dense[e.index] = e.value;
    return dense;
  }

  bool operator==(const SparseCode&) const = default;

 private:
  void validate() const {
    require(length_ >= 0, Errc::InvalidArgument, "negative code length");
    require(static_cast<Index>(entries_.size()) <= length_, Errc::InvalidArgument,
            "more entries than code length");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      require(e.index >= 0 && e.index < length_, Errc::InvalidArgument,
              "entry index " + std::to_string(e.index) + " outside [0, " +
                  std::to_string(length_) + ")");
      require(e.value != Scalar(0) && std::isfinite(static_cast<double>(e.value)),
              Errc::InvalidArgument, "stored value must be nonzero and finite");
      require(i == 0 || entries_[i - 1].index < e.index, Errc::InvalidArgument,
              "entry indices must be strictly increasing");
    }
  }

  Index length_ = 0;
  std::vector<Entry<Scalar>> entries_;
};

/// Sparse code with values restricted to {-1, +1}.
template <typename Scalar>
class TernaryCode : public SparseCode<Scalar> {
 public:
  TernaryCode() = default;
  TernaryCode(Index length, std::vector<Entry<Scalar>> entries)
      : SparseCode<Scalar>(length, std::move(entries)) {
    for (const auto& e : this->entries()) {
      require(e.value == Scalar(1) || e.value == Scalar(-1), Errc::InvalidArgument,
              "ternary values must be +1 or -1");
    }
  }
};

/// A released code: true entries plus `noise_count` support-complement
/// noise entries. The server cannot tell which is which.
template <typename Scalar>
class AmbiguatedCode : public SparseCode<Scalar> {
 public:
  AmbiguatedCode() = default;
  AmbiguatedCode(SparseCode<Scalar> code, Index noise_count)
      : SparseCode<Scalar>(std::move(code)), noise_count_(noise_count) {}

  Index noise_count() const noexcept { return noise_count_; }

 private:
  Index noise_count_ = 0;
};

/// L x M collection of sparse codes, one per data point.
template <typename Scalar>
struct Codebook {
  Index code_len = 0;
  std::vector<SparseCode<Scalar>> columns;

  Index n_points() const noexcept { return static_cast<Index>(columns.size()); }

  Matrix<Scalar> to_dense() const {
    Matrix<Scalar> a = Matrix<Scalar>::Zero(code_len, n_points());
    for (Index m = 0; m < n_points(); ++m) {
      for (const auto& e : columns[m].entries()) a(e.index, m) = e.value;
    }
    return a;
  }
};

inline Support support_intersection(const Support& a, const Support& b) {
  Support out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace sca
