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
#include <vector>

#include <Eigen/Dense>

#include "sca/core.hpp"
#include "sca/sparse_code.hpp"
#include "sca/transform.hpp"

namespace sca {

template <typename Scalar, typename Derived>
SparseCode<Scalar> encode(const SparsifyingTransform<Scalar>& t,
                          const Eigen::MatrixBase<Derived>& x) {
  require(x.size() == t.cols(), Errc::DimensionMismatch,
          "point has " + std::to_string(x.size()) + " dims, transform expects " +
              std::to_string(t.cols()));
  require(x.allFinite(), Errc::InvalidArgument, "point has non-finite entries");
  const Vector<Scalar> f = t.w() * x;
  if (const auto* top = std::get_if<TopS>(&t.policy())) return detail::truncate_top(f, top->s_x);
  const double lambda = std::get<Threshold>(t.policy()).lambda;
  std::vector<Entry<Scalar>> entries;
  for (Index l = 0; l < f.size(); ++l) {
    if (f[l] != Scalar(0) && std::abs(double(f[l])) >= lambda) entries.push_back({l, f[l]});
  }
  return SparseCode<Scalar>(f.size(), std::move(entries));
}

/// Sparse ternary code: the TopS support of W x with values sign((W x)_l).
/// Exact zeros are never kept; the next-largest magnitude takes their place.
template <typename Scalar, typename Derived>
TernaryCode<Scalar> encode_ternary(const SparsifyingTransform<Scalar>& t,
                                   const Eigen::MatrixBase<Derived>& x) {
  require(std::holds_alternative<TopS>(t.policy()), Errc::InvalidArgument,
          "ternary encoding requires the TopS policy");
  const SparseCode<Scalar> real = encode(t, x);
  std::vector<Entry<Scalar>> entries;
  entries.reserve(real.nnz());
  for (const auto& e : real.entries()) entries.push_back({e.index, e.value > 0 ? Scalar(1) : Scalar(-1)});
  return TernaryCode<Scalar>(real.length(), std::move(entries));
}

template <typename Scalar, typename Derived>
Codebook<Scalar> encode_all(const SparsifyingTransform<Scalar>& t,
                            const Eigen::MatrixBase<Derived>& x, bool ternary = false) {
  Codebook<Scalar> book{t.rows(), {}};
  book.columns.reserve(x.cols());
  for (Index m = 0; m < x.cols(); ++m) {
    if (ternary) {
      book.columns.push_back(encode_ternary(t, x.col(m)));
    } else {
      book.columns.push_back(encode(t, x.col(m)));
    }
  }
  return book;
}

enum class DecoderMode { Orthonormal, Ridge };

/// Reconstruction map R (N x L).
template <typename Scalar>
struct Decoder {
  Matrix<Scalar> r;
  DecoderMode mode = DecoderMode::Ridge;
  double beta_r = 0.0;
  double beta = 0.0;

  Index n_dims() const noexcept { return r.rows(); }
  Index code_len() const noexcept { return r.cols(); }
};

/// C = (W^T W + beta I)^{-1} W^T, the regularized left inverse of W.
template <typename Scalar>
Matrix<Scalar> ridge_inverse(const Matrix<Scalar>& w, double beta) {
  require(beta >= 0, Errc::InvalidArgument, "beta must be >= 0");
  const Index n = w.cols();
  const Matrix<Scalar> system = w.transpose() * w + Scalar(beta) * Matrix<Scalar>::Identity(n, n);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(system);
  const auto& sv = svd.singularValues();
  require(sv(0) > 0 && sv(sv.size() - 1) > sv(0) * Scalar(1e-13), Errc::SingularSystem,
          "W^T W + beta I is numerically singular");
  return system.ldlt().solve(w.transpose());
}

/// Learns R. Orthonormal mode solves the constrained problem
///   min ||R A - X||^2 + beta_r ||R - C||^2  s.t.  R^T R = I
/// in closed form: with G = A X^T + beta_r C^T = U S V^T (thin SVD),
/// R = V U^T maximizes tr[G R]. Ridge mode returns R = C.
template <typename Scalar>
Decoder<Scalar> learn_decoder(const Matrix<Scalar>& w, const Codebook<Scalar>& a,
                              const DataMatrix<Scalar>& x, double beta_r, double beta,
                              DecoderMode mode) {
  require(w.cols() == x.rows() && a.code_len == w.rows() && a.n_points() == x.cols(),
          Errc::DimensionMismatch,
          "W " + shape_str(w.rows(), w.cols()) + ", A " + shape_str(a.code_len, a.n_points()) +
              ", X " + shape_str(x.rows(), x.cols()));
  require(beta_r >= 0, Errc::InvalidArgument, "beta_r must be >= 0");
  const Index l = w.rows();
  const Index n = w.cols();
  if (mode == DecoderMode::Orthonormal) {
    require(l <= n, Errc::ShapeUnsupported,
            "orthonormal decoder requires L <= N (L=" + std::to_string(l) +
                ", N=" + std::to_string(n) + ")");
  }
  const Matrix<Scalar> c = ridge_inverse(w, beta);
  if (mode == DecoderMode::Ridge) return {c, mode, beta_r, beta};

  const Matrix<Scalar> g = a.to_dense() * x.transpose() + Scalar(beta_r) * c.transpose();
  Eigen::JacobiSVD<Matrix<Scalar>> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix<Scalar> r = svd.matrixV() * svd.matrixU().transpose();
  return {std::move(r), mode, beta_r, beta};
}

/// Orthonormal when L <= N, ridge otherwise.
template <typename Scalar>
DecoderMode default_decoder_mode(const SparsifyingTransform<Scalar>& t) {
  return t.rows() <= t.cols() ? DecoderMode::Orthonormal : DecoderMode::Ridge;
}

template <typename Scalar>
Vector<Scalar> decode(const Decoder<Scalar>& d, const SparseCode<Scalar>& a) {
  require(a.length() == d.code_len(), Errc::DimensionMismatch,
          "code length " + std::to_string(a.length()) + " vs decoder L " +
              std::to_string(d.code_len()));
  Vector<Scalar> out = Vector<Scalar>::Zero(d.n_dims());
  for (const auto& e : a.entries()) out += e.value * d.r.col(e.index);
  return out;
}

/// Restriction of `p` to `key_support`; drops everything else.
template <typename Scalar>
SparseCode<Scalar> purify(const SparseCode<Scalar>& p, const Support& key_support) {
  require(std::is_sorted(key_support.begin(), key_support.end()), Errc::InvalidArgument,
          "key support must be sorted");
  require(key_support.empty() || (key_support.front() >= 0 && key_support.back() < p.length()),
          Errc::InvalidArgument, "key support outside [0, L)");
  std::vector<Entry<Scalar>> kept;
  auto key = key_support.begin();
  for (const auto& e : p.entries()) {
    while (key != key_support.end() && *key < e.index) ++key;
    if (key == key_support.end()) break;
    if (*key == e.index) kept.push_back(e);
  }
  return SparseCode<Scalar>(p.length(), std::move(kept));
}

/// Global least-squares scale alpha = <xhat, x> / <xhat, xhat>; 0 for xhat = 0.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar least_squares_scale(const Eigen::MatrixBase<DerivedA>& x,
                                              const Eigen::MatrixBase<DerivedB>& xhat) {
  const auto denom = xhat.squaredNorm();
  return denom > 0 ? xhat.dot(x) / denom : typename DerivedA::Scalar(0);
}

}  // namespace sca
