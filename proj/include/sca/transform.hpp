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

// Sparsifying transform learning.
//
// The transform W (L x N) and the codebook A (L x M) are learned jointly by
// minimizing
//
//   ||W X - A||_F^2 + beta1 * Omega1(W)
//
//   Omega1(W) = ||W||_F^2 / beta11 + ||W W^T - I||_F^2 / beta12
//               - log|det(W^T W)| / beta13
//
// subject to every column of A having at most S_x nonzeros. The problem is
// solved by alternating an exact top-S_x sparse coding step with a gradient
// step on W (backtracking line search, Armijo condition).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sca/core.hpp"
#include "sca/sparse_code.hpp"

namespace sca {

// Keep the s_x largest-magnitude entries.
struct TopS {
  Index s_x = 1;
};

// Keep entries with |value| >= lambda.
struct Threshold {
  double lambda = 0.0;
};

using EncodingPolicy = std::variant<TopS, Threshold>;

inline constexpr double kSingularTolerance = 1e-10;

/// Learned linear map W (L x N) together with its encoding policy.
///
/// Invariants: finite entries, a valid policy, and W^T W nonsingular (the
/// smallest singular value of W exceeds 1e-10 and L >= N).
template <typename Scalar>
class SparsifyingTransform {
 public:
  SparsifyingTransform(Matrix<Scalar> w, EncodingPolicy policy)
      : w_(std::move(w)), policy_(policy) {
    require(w_.rows() >= 1 && w_.cols() >= 1, Errc::InvalidArgument, "empty transform");
    require(w_.allFinite(), Errc::InvalidArgument, "transform has non-finite entries");
    if (const auto* top = std::get_if<TopS>(&policy_)) {
      require(top->s_x >= 1 && top->s_x <= w_.rows(), Errc::InvalidArgument,
              "S_x must lie in [1, L]");
    } else {
      require(std::get<Threshold>(policy_).lambda >= 0.0, Errc::InvalidArgument,
              "threshold must be nonnegative");
    }
    check_gram_nonsingular(w_);
  }

  const Matrix<Scalar>& w() const noexcept { return w_; }
  Index rows() const noexcept { return w_.rows(); }
  Index cols() const noexcept { return w_.cols(); }
  const EncodingPolicy& policy() const noexcept { return policy_; }

  static void check_gram_nonsingular(const Matrix<Scalar>& w) { gram_singular_values(w); }

  /// Singular values of W (L >= N), ascending; throws SingularTransform when
  /// the smallest does not exceed 1e-10.
  static Vector<Scalar> gram_singular_values(const Matrix<Scalar>& w) {
    require(w.rows() >= w.cols(), Errc::SingularTransform,
            "W^T W is singular for L < N (W is " + shape_str(w.rows(), w.cols()) + ")");
    const Matrix<Scalar> gram = w.transpose() * w;
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(gram, Eigen::EigenvaluesOnly);
    Vector<Scalar> sv;
    // The eigenvalues of W^T W resolve sigma_min only down to about
    // sqrt(eps) * sigma_max; below that, fall back to an SVD of W itself.
    const Scalar lambda_max = eig.eigenvalues().maxCoeff();
    if (eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > Scalar(1e-6) * lambda_max) {
      sv = eig.eigenvalues().cwiseSqrt();
    } else {
      Eigen::JacobiSVD<Matrix<Scalar>> svd(w);
      sv = svd.singularValues().reverse();
    }
    require(sv(0) > Scalar(kSingularTolerance), Errc::SingularTransform,
            "smallest singular value of W is " + std::to_string(double(sv(0))));
    return sv;
  }

 private:
  Matrix<Scalar> w_;
  EncodingPolicy policy_;
};

struct LearningConfig {
  double beta1 = 1.0;
  // Kept for completeness; the sparsity term is enforced as a hard constraint.
  double beta2 = 0.0;
  double beta11 = 1.0;
  double beta12 = 1.0;
  double beta13 = 1.0;
  Index s_x = 1;
  int max_iters = 200;
  int inner_steps = 1;
  double step_init = 1.0;
  double obj_tol = 1e-6;
  std::uint64_t rng_seed = 0;

  void validate() const {
    require(beta1 >= 0 && beta2 >= 0, Errc::InvalidArgument, "beta1, beta2 must be >= 0");
    require(beta11 > 0 && beta12 > 0 && beta13 > 0, Errc::InvalidArgument,
            "beta11, beta12, beta13 must be > 0");
    require(s_x >= 1, Errc::InvalidArgument, "s_x must be >= 1");
    require(max_iters >= 1, Errc::InvalidArgument, "max_iters must be >= 1");
    require(inner_steps >= 1, Errc::InvalidArgument, "inner_steps must be >= 1");
    require(step_init > 0, Errc::InvalidArgument, "step_init must be > 0");
    require(obj_tol > 0, Errc::InvalidArgument, "obj_tol must be > 0");
  }
};

namespace detail {

// Indices of the s largest |v| entries among the nonzeros, ties to the lower
// index, returned in increasing index order.
template <typename Derived>
std::vector<Index> top_magnitude_indices(const Eigen::MatrixBase<Derived>& v, Index s) {
  std::vector<Index> order;
  order.reserve(v.size());
  for (Index l = 0; l < v.size(); ++l) {
    if (v[l] != 0) order.push_back(l);
  }
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(std::max<Index>(s, 0)),
                                          order.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(), [&](Index a, Index b) {
    const auto ma = std::abs(v[a]);
    const auto mb = std::abs(v[b]);
    return ma > mb || (ma == mb && a < b);
  });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

template <typename Derived>
auto truncate_top(const Eigen::MatrixBase<Derived>& v, Index s) {
  using Scalar = typename Derived::Scalar;
  std::vector<Entry<Scalar>> entries;
  for (Index l : top_magnitude_indices(v, s)) entries.push_back({l, v[l]});
  return SparseCode<Scalar>(v.size(), std::move(entries));
}

template <typename Derived>
typename Derived::Scalar log_abs_det_gram(const Eigen::MatrixBase<Derived>& w) {
  using Scalar = typename Derived::Scalar;
  const auto sv = SparsifyingTransform<Scalar>::gram_singular_values(w.eval());
  return Scalar(2) * sv.array().log().sum();
}

template <typename Scalar>
void check_shapes(const Matrix<Scalar>& w, const Matrix<Scalar>& a, const Matrix<Scalar>& x) {
  require(w.cols() == x.rows() && a.rows() == w.rows() && a.cols() == x.cols(),
          Errc::DimensionMismatch,
          "W " + shape_str(w.rows(), w.cols()) + ", A " + shape_str(a.rows(), a.cols()) +
              ", X " + shape_str(x.rows(), x.cols()));
}

template <typename Scalar>
Scalar data_term(const Matrix<Scalar>& w, const Matrix<Scalar>& a, const Matrix<Scalar>& x) {
  return (w * x - a).squaredNorm();
}

}  // namespace detail

/// Information-loss regularizer on W. Throws SingularTransform when W^T W is
/// (numerically) singular.
template <typename Derived>
typename Derived::Scalar omega1(const Eigen::MatrixBase<Derived>& w, const LearningConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  const Index l = w.rows();
  const Scalar log_det = detail::log_abs_det_gram(w);
  const Scalar frob = w.squaredNorm();
  const Scalar ortho = (w * w.transpose() - Matrix<Scalar>::Identity(l, l)).squaredNorm();
  return frob / Scalar(cfg.beta11) + ortho / Scalar(cfg.beta12) - log_det / Scalar(cfg.beta13);
}

/// Exact minimizer of ||W X - A||_F^2 over A with ||a(m)||_0 <= s_x: each
/// column keeps the s_x largest-magnitude entries of W x(m).
template <typename DerivedW, typename DerivedX>
Codebook<typename DerivedW::Scalar> sparse_coding_step(const Eigen::MatrixBase<DerivedW>& w,
                                                       const Eigen::MatrixBase<DerivedX>& x,
                                                       Index s_x) {
  using Scalar = typename DerivedW::Scalar;
  require(w.cols() == x.rows(), Errc::DimensionMismatch,
          "W " + shape_str(w.rows(), w.cols()) + " vs X " + shape_str(x.rows(), x.cols()));
  require(s_x >= 1 && s_x <= w.rows(), Errc::InvalidArgument, "S_x must lie in [1, L]");
  const Matrix<Scalar> wx = w * x;
  Codebook<Scalar> book{w.rows(), {}};
  book.columns.reserve(x.cols());
  for (Index m = 0; m < x.cols(); ++m) book.columns.push_back(detail::truncate_top(wx.col(m), s_x));
  return book;
}

/// Throws InfeasibleCodebook unless every column spends exactly its sparsity
/// budget: ||a(m)||_0 == min(s_x, ||W x(m)||_0).
template <typename Scalar>
void check_codebook_feasible(const Matrix<Scalar>& w, const Codebook<Scalar>& a,
                             const DataMatrix<Scalar>& x, Index s_x) {
  require(a.code_len == w.rows() && a.n_points() == x.cols() && w.cols() == x.rows(),
          Errc::DimensionMismatch, "codebook does not match W and X");
  const Matrix<Scalar> wx = w * x;
  for (Index m = 0; m < a.n_points(); ++m) {
    const Index available = (wx.col(m).array() != Scalar(0)).count();
    const Index want = std::min(s_x, available);
    require(a.columns[m].length() == a.code_len, Errc::DimensionMismatch,
            "codebook column " + std::to_string(m) + " has wrong length");
    require(a.columns[m].nnz() == want, Errc::InfeasibleCodebook,
            "column " + std::to_string(m) + " has " + std::to_string(a.columns[m].nnz()) +
                " nonzeros, expected " + std::to_string(want));
  }
}

template <typename Scalar>
Scalar objective(const Matrix<Scalar>& w, const Codebook<Scalar>& a, const DataMatrix<Scalar>& x,
                 const LearningConfig& cfg) {
  const Matrix<Scalar> dense = a.to_dense();
  detail::check_shapes(w, dense, x);
  check_codebook_feasible(w, a, x, cfg.s_x);
  return detail::data_term(w, dense, x) + Scalar(cfg.beta1) * omega1(w, cfg);
}

namespace detail {

template <typename Scalar>
Matrix<Scalar> gradient_dense(const Matrix<Scalar>& w, const Matrix<Scalar>& a,
                              const Matrix<Scalar>& x, const LearningConfig& cfg) {
  const Index l = w.rows();
  Matrix<Scalar> grad = Scalar(2) * (w * x - a) * x.transpose();
  if (cfg.beta1 != 0) {
    // Validates nonsingularity with the same tolerance as omega1.
    SparsifyingTransform<Scalar>::check_gram_nonsingular(w);
    const Matrix<Scalar> gram = w.transpose() * w;
    const Matrix<Scalar> w_gram_inv = gram.ldlt().solve(w.transpose()).transpose();
    const Matrix<Scalar> reg =
        (Scalar(2) / Scalar(cfg.beta11)) * w +
        (Scalar(4) / Scalar(cfg.beta12)) * (w * w.transpose() - Matrix<Scalar>::Identity(l, l)) * w -
        (Scalar(2) / Scalar(cfg.beta13)) * w_gram_inv;
    grad += Scalar(cfg.beta1) * reg;
  }
  return grad;
}

template <typename Scalar>
Scalar objective_dense(const Matrix<Scalar>& w, const Matrix<Scalar>& a, const Matrix<Scalar>& x,
                       const LearningConfig& cfg) {
  return data_term(w, a, x) + Scalar(cfg.beta1) * omega1(w, cfg);
}

}  // namespace detail

/// Gradient of the objective with respect to W, holding A fixed.
template <typename Scalar>
Matrix<Scalar> objective_gradient_w(const Matrix<Scalar>& w, const Codebook<Scalar>& a,
                                    const DataMatrix<Scalar>& x, const LearningConfig& cfg) {
  const Matrix<Scalar> dense = a.to_dense();
  detail::check_shapes(w, dense, x);
  return detail::gradient_dense(w, dense, x, cfg);
}

template <typename Scalar>
struct TransformUpdate {
  SparsifyingTransform<Scalar> transform;
  Scalar objective_before;
  Scalar objective_after;
  // Last accepted step length (or the initial step if none was accepted).
  Scalar step;
  bool line_search_failed = false;
};

inline constexpr int kMaxHalvings = 30;
inline constexpr double kArmijoC = 1e-4;
inline constexpr double kStationaryGradNorm = 1e-12;

namespace detail {

template <typename Scalar>
TransformUpdate<Scalar> update_dense(const SparsifyingTransform<Scalar>& t, const Matrix<Scalar>& a,
                                     const Matrix<Scalar>& x, const LearningConfig& cfg,
                                     Scalar initial_step) {
  Matrix<Scalar> w = t.w();
  const Scalar start = objective_dense(w, a, x, cfg);
  Scalar current = start;
  Scalar step = initial_step;
  bool failed = false;
  for (int inner = 0; inner < cfg.inner_steps; ++inner) {
    const Matrix<Scalar> grad = gradient_dense(w, a, x, cfg);
    const Scalar grad_sq = grad.squaredNorm();
    if (std::sqrt(grad_sq) < Scalar(kStationaryGradNorm)) break;
    bool accepted = false;
    Scalar trial_step = step;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      Matrix<Scalar> candidate = w - trial_step * grad;
      Scalar value = std::numeric_limits<Scalar>::infinity();
      try {
        value = objective_dense(candidate, a, x, cfg);
      } catch (const Error& e) {
        if (e.code() != Errc::SingularTransform) throw;
      }
      if (std::isfinite(double(value)) &&
          value <= current - Scalar(kArmijoC) * trial_step * grad_sq) {
        w = std::move(candidate);
        current = value;
        step = trial_step;
        accepted = true;
        break;
      }
      trial_step /= Scalar(2);
    }
    if (!accepted) {
      failed = true;
      break;
    }
  }
  if (failed && current == start) {
    return {t, start, start, step, true};
  }
  return {SparsifyingTransform<Scalar>(std::move(w), t.policy()), start, current, step, failed};
}

}  // namespace detail

/// One or more gradient steps on W with A fixed. The returned objective never
/// exceeds the input objective; if no step satisfies the Armijo condition
/// within 30 halvings, W is returned unchanged with `line_search_failed` set.
template <typename Scalar>
TransformUpdate<Scalar> transform_update_step(const SparsifyingTransform<Scalar>& t,
                                              const Codebook<Scalar>& a,
                                              const DataMatrix<Scalar>& x,
                                              const LearningConfig& cfg) {
  cfg.validate();
  const Matrix<Scalar> dense = a.to_dense();
  detail::check_shapes(t.w(), dense, x);
  check_codebook_feasible(t.w(), a, x, cfg.s_x);
  return detail::update_dense(t, dense, x, cfg, Scalar(cfg.step_init));
}

template <typename Scalar>
struct LearnResult {
  SparsifyingTransform<Scalar> transform;
  Codebook<Scalar> codebook;
  // Objective after each alternation, starting with the initial point.
  std::vector<Scalar> objective_trace;
  int iterations = 0;
  int line_search_failures = 0;
  bool converged = false;
};

/// Random L x N start with orthonormal columns (orthonormal rows when L == N).
template <typename Scalar>
Matrix<Scalar> random_orthonormal(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix<Scalar> g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = Scalar(normal(rng));
  if (rows >= cols) {
    Eigen::HouseholderQR<Matrix<Scalar>> qr(g);
    return qr.householderQ() * Matrix<Scalar>::Identity(rows, cols);
  }
  Eigen::HouseholderQR<Matrix<Scalar>> qr(g.transpose());
  return (qr.householderQ() * Matrix<Scalar>::Identity(cols, rows)).transpose();
}

/// Alternating minimization from a seeded random start. Requires L >= N so
/// that log|det(W^T W)| is finite.
template <typename Scalar>
LearnResult<Scalar> learn_transform(const DataMatrix<Scalar>& x, Index code_len,
                                    const LearningConfig& cfg) {
  cfg.validate();
  require(x.rows() >= 1 && x.cols() >= 1, Errc::InvalidArgument, "empty data matrix");
  require(x.allFinite(), Errc::InvalidArgument, "data matrix has non-finite entries");
  require(code_len >= x.rows(), Errc::ShapeUnsupported,
          "learning requires L >= N (L=" + std::to_string(code_len) +
              ", N=" + std::to_string(x.rows()) + ")");
  require(cfg.s_x <= code_len, Errc::InvalidArgument, "S_x exceeds L");

  Rng rng(cfg.rng_seed);
  Matrix<Scalar> w0;
  for (int attempt = 0;; ++attempt) {
    w0 = random_orthonormal<Scalar>(code_len, x.rows(), rng);
    try {
      SparsifyingTransform<Scalar>::check_gram_nonsingular(w0);
      break;
    } catch (const Error&) {
      if (attempt >= 5) throw;
      rng.seed(cfg.rng_seed + std::uint64_t(attempt) + 1);
    }
  }

  const TopS policy{cfg.s_x};
  SparsifyingTransform<Scalar> t(std::move(w0), policy);
  Codebook<Scalar> book = sparse_coding_step(t.w(), x, cfg.s_x);
  Matrix<Scalar> a = book.to_dense();

  LearnResult<Scalar> result{t, book, {}, 0, 0, false};
  result.objective_trace.push_back(detail::objective_dense(t.w(), a, x, cfg));
  Scalar step = Scalar(cfg.step_init);

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    auto update = detail::update_dense(t, a, x, cfg, std::min(Scalar(2) * step, Scalar(cfg.step_init)));
    if (update.line_search_failed) ++result.line_search_failures;
    step = update.step;
    t = std::move(update.transform);
    book = sparse_coding_step(t.w(), x, cfg.s_x);
    a = book.to_dense();
    const Scalar value = detail::objective_dense(t.w(), a, x, cfg);
    const Scalar previous = result.objective_trace.back();
    result.objective_trace.push_back(value);
    result.iterations = iter + 1;
    const Scalar scale = std::max(std::abs(previous), std::numeric_limits<Scalar>::min());
    if ((previous - value) / scale < Scalar(cfg.obj_tol)) {
      result.converged = true;
      break;
    }
  }
  result.transform = std::move(t);
  result.codebook = std::move(book);
  return result;
}

}  // namespace sca
