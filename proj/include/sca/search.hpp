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

// Server-side search over released codes. Distances are measured on the
// support of the probe; the index is a linear scan in ascending id order, and
// every tie is broken by ascending id.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "sca/core.hpp"
#include "sca/sparse_code.hpp"

namespace sca {

using Id = std::int64_t;

enum class LatentMetric {
  // |supp(q)| - |supp(q) ∩ supp(p)|
  SupportOverlap,
  // sqrt(sum over l in supp(q) of (q_l - p_l)^2)
  MaskedEuclidean,
};

template <typename Scalar>
double latent_distance(const SparseCode<Scalar>& q, const SparseCode<Scalar>& p, LatentMetric metric) {
  require(q.length() == p.length(), Errc::DimensionMismatch,
          "probe length " + std::to_string(q.length()) + " vs code length " +
              std::to_string(p.length()));
  auto it = p.entries().begin();
  const auto end = p.entries().end();
  if (metric == LatentMetric::SupportOverlap) {
    Index shared = 0;
    for (const auto& e : q.entries()) {
      while (it != end && it->index < e.index) ++it;
      if (it != end && it->index == e.index) ++shared;
    }
    return double(q.nnz() - shared);
  }
  double sum = 0.0;
  for (const auto& e : q.entries()) {
    while (it != end && it->index < e.index) ++it;
    const double other = (it != end && it->index == e.index) ? double(it->value) : 0.0;
    const double diff = double(e.value) - other;
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

template <typename Scalar>
struct IndexedCode {
  Id id;
  AmbiguatedCode<Scalar> code;
};

/// Immutable server-side collection of released codes.
template <typename Scalar>
class SearchIndex {
 public:
  SearchIndex(std::vector<IndexedCode<Scalar>> codes, LatentMetric metric, double radius,
              double epsilon)
      : codes_(std::move(codes)), metric_(metric), radius_(radius), epsilon_(epsilon) {
    require(radius >= 0, Errc::InvalidArgument, "radius must be >= 0");
    require(epsilon >= 0, Errc::InvalidArgument, "epsilon must be >= 0");
    std::sort(codes_.begin(), codes_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < codes_.size(); ++i) {
      require(i == 0 || codes_[i - 1].id != codes_[i].id, Errc::InvalidArgument,
              "duplicate id " + std::to_string(codes_[i].id));
      require(codes_[i].code.length() == codes_.front().code.length(), Errc::DimensionMismatch,
              "codes in an index must share one length");
    }
  }

  /// Ids are the positions 0..M-1.
  static SearchIndex from_codes(const std::vector<AmbiguatedCode<Scalar>>& codes, LatentMetric metric,
                                double radius, double epsilon) {
    std::vector<IndexedCode<Scalar>> items;
    items.reserve(codes.size());
    for (std::size_t m = 0; m < codes.size(); ++m) items.push_back({Id(m), codes[m]});
    return SearchIndex(std::move(items), metric, radius, epsilon);
  }

  const std::vector<IndexedCode<Scalar>>& codes() const noexcept { return codes_; }
  Index size() const noexcept { return static_cast<Index>(codes_.size()); }
  Index code_len() const noexcept { return codes_.empty() ? 0 : codes_.front().code.length(); }
  LatentMetric metric() const noexcept { return metric_; }
  double radius() const noexcept { return radius_; }
  double epsilon() const noexcept { return epsilon_; }

  /// Distance from q to every stored code, in id order.
  std::vector<double> distances(const SparseCode<Scalar>& q) const {
    std::vector<double> out;
    out.reserve(codes_.size());
    for (const auto& item : codes_) out.push_back(latent_distance(q, item.code, metric_));
    return out;
  }

 private:
  std::vector<IndexedCode<Scalar>> codes_;
  LatentMetric metric_;
  double radius_;
  double epsilon_;
};

/// Ids of all codes within `radius` of q, ascending.
template <typename Scalar>
std::vector<Id> ball_query(const SearchIndex<Scalar>& index, const SparseCode<Scalar>& q,
                           double radius) {
  std::vector<Id> out;
  for (const auto& item : index.codes()) {
    if (latent_distance(q, item.code, index.metric()) <= radius) out.push_back(item.id);
  }
  return out;
}

template <typename Scalar>
std::vector<Id> ball_query(const SearchIndex<Scalar>& index, const SparseCode<Scalar>& q) {
  return ball_query(index, q, index.radius());
}

struct QueryResult {
  Id chosen_id;
  Index neighborhood_size;
  std::vector<Id> candidates;
};

/// Reports one candidate uniformly at random. An empty neighborhood throws
/// EmptyNeighborhood ("no such point exists").
inline QueryResult fair_sample(const std::vector<Id>& candidates, Rng& rng) {
  require(!candidates.empty(), Errc::EmptyNeighborhood, "no such point exists");
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return {candidates[pick(rng)], static_cast<Index>(candidates.size()), candidates};
}

/// The k nearest ids by latent distance, ties by ascending id.
template <typename Scalar>
std::vector<Id> knn(const SearchIndex<Scalar>& index, const SparseCode<Scalar>& q, Index k) {
  require(k >= 1 && k <= index.size(), Errc::InvalidArgument,
          "k must lie in [1, M]");
  const auto dist = index.distances(q);
  std::vector<std::size_t> order(dist.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto& codes = index.codes();
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && codes[a].id < codes[b].id);
  });
  std::vector<Id> out;
  out.reserve(k);
  for (Index i = 0; i < k; ++i) out.push_back(codes[order[i]].id);
  return out;
}

/// |ground_truth ∩ retrieved| / |ground_truth|.
inline double recall_at_t(const std::vector<Id>& ground_truth, const std::vector<Id>& retrieved) {
  require(!ground_truth.empty(), Errc::EmptyGroundTruth, "ground-truth list is empty");
  const std::set<Id> found(retrieved.begin(), retrieved.end());
  const std::set<Id> truth(ground_truth.begin(), ground_truth.end());
  std::size_t hits = 0;
  for (Id id : truth) hits += found.count(id);
  return double(hits) / double(truth.size());
}

}  // namespace sca
