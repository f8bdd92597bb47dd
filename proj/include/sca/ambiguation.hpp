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

// Release mechanisms for the database (f) and the query (g): a sparse code is
// published together with noise entries placed on the complement of its
// support. Noise values resample the empirical magnitude law of the codebook
// with random signs, so noise and true entries share the same marginal.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "sca/core.hpp"
#include "sca/sparse_code.hpp"

namespace sca {

template <typename Scalar>
struct NoiseModel {
  // Empty iff ternary.
  std::vector<Scalar> magnitude_pool;
  bool ternary = false;

  static NoiseModel make_ternary() { return {{}, true}; }
};

template <typename Scalar>
NoiseModel<Scalar> build_noise_model(const Codebook<Scalar>& book) {
  NoiseModel<Scalar> model;
  for (const auto& code : book.columns)
    for (const auto& e : code.entries()) model.magnitude_pool.push_back(std::abs(e.value));
  require(!model.magnitude_pool.empty(), Errc::EmptyCodebook,
          "codebook has no nonzero entries to model noise from");
  return model;
}

/// Noise counts for the two reference levels: half = floor((L - S_x) / 2),
/// full = L - S_x.
struct AmbiguationLevels {
  Index half;
  Index full;

  bool operator==(const AmbiguationLevels&) const = default;
};

inline AmbiguationLevels ambiguation_levels(Index code_len, Index s_x) {
  require(s_x >= 0 && s_x <= code_len, Errc::InvalidArgument, "S_x must lie in [0, L]");
  const Index full = code_len - s_x;
  return {full / 2, full};
}

/// Adds exactly `s_p` noise entries at indices drawn uniformly without
/// replacement from the complement of supp(a).
template <typename Scalar>
AmbiguatedCode<Scalar> ambiguate(const SparseCode<Scalar>& a, Index s_p,
                                 const NoiseModel<Scalar>& model, Rng& rng) {
  const Index free = a.length() - a.nnz();
  require(s_p >= 0, Errc::InvalidArgument, "negative noise count");
  require(s_p <= free, Errc::AmbiguationBudgetExceeded,
          "S_p=" + std::to_string(s_p) + " exceeds L - ||a||_0 = " + std::to_string(free));
  require(model.ternary || !model.magnitude_pool.empty(), Errc::EmptyCodebook,
          "noise model has an empty magnitude pool");
  if (s_p == 0) return AmbiguatedCode<Scalar>(a, 0);

  std::vector<Index> complement;
  complement.reserve(free);
  {
    auto it = a.entries().begin();
    for (Index l = 0; l < a.length(); ++l) {
      if (it != a.entries().end() && it->index == l) {
        ++it;
      } else {
        complement.push_back(l);
      }
    }
  }
  // Partial Fisher-Yates: the first s_p slots become a uniform s_p-subset.
  for (Index i = 0; i < s_p; ++i) {
    std::uniform_int_distribution<Index> pick(i, free - 1);
    std::swap(complement[i], complement[pick(rng)]);
  }

  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> draw(
      0, model.ternary ? 0 : model.magnitude_pool.size() - 1);
  std::vector<Entry<Scalar>> noise;
  noise.reserve(s_p);
  for (Index i = 0; i < s_p; ++i) {
    const Scalar magnitude = model.ternary ? Scalar(1) : model.magnitude_pool[draw(rng)];
    noise.push_back({complement[i], coin(rng) ? magnitude : -magnitude});
  }
  std::sort(noise.begin(), noise.end(), [](const auto& x, const auto& y) { return x.index < y.index; });

  std::vector<Entry<Scalar>> merged;
  merged.reserve(a.nnz() + s_p);
  std::merge(a.entries().begin(), a.entries().end(), noise.begin(), noise.end(),
             std::back_inserter(merged),
             [](const auto& x, const auto& y) { return x.index < y.index; });
  return AmbiguatedCode<Scalar>(SparseCode<Scalar>(a.length(), std::move(merged)), s_p);
}

/// Query release: like `ambiguate`, with the query budget capped by the
/// database budget (S_q <= S_p). S_q = 0 releases the clean code.
template <typename Scalar>
AmbiguatedCode<Scalar> ambiguate_query(const SparseCode<Scalar>& b, Index s_q, Index s_p_configured,
                                       const NoiseModel<Scalar>& model, Rng& rng) {
  require(s_q <= s_p_configured, Errc::QueryNoiseExceedsDatabaseNoise,
          "S_q=" + std::to_string(s_q) + " exceeds database S_p=" +
              std::to_string(s_p_configured));
  return ambiguate(b, s_q, model, rng);
}

template <typename Scalar>
std::vector<AmbiguatedCode<Scalar>> ambiguate_all(const Codebook<Scalar>& book, Index s_p,
                                                  const NoiseModel<Scalar>& model, Rng& rng) {
  std::vector<AmbiguatedCode<Scalar>> out;
  out.reserve(book.columns.size());
  for (const auto& code : book.columns) out.push_back(ambiguate(code, s_p, model, rng));
  return out;
}

}  // namespace sca
