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

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"
#include "sca/search.hpp"
#include "sca/stats.hpp"

namespace sca {
namespace {

using testing::expect_error;

SparseCode<double> random_code(Index l, double density, bool ternary, Rng& rng) {
  std::bernoulli_distribution keep(density);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Entry<double>> e;
  for (Index i = 0; i < l; ++i) {
    if (!keep(rng)) continue;
    double v = n(rng);
    if (ternary) v = v > 0 ? 1.0 : -1.0;
    if (v != 0) e.push_back({i, v});
  }
  return SparseCode<double>(l, e);
}

std::vector<AmbiguatedCode<double>> random_codes(Index m, Index l, bool ternary, Rng& rng) {
  std::vector<AmbiguatedCode<double>> out;
  for (Index i = 0; i < m; ++i) out.emplace_back(random_code(l, 0.3, ternary, rng), 0);
  return out;
}

double dense_distance(const SparseCode<double>& q, const SparseCode<double>& p, LatentMetric metric) {
  return metric == LatentMetric::SupportOverlap ? oracle::overlap_distance_dense(q.to_dense(), p.to_dense())
                                                : oracle::masked_distance_dense(q.to_dense(), p.to_dense());
}

TEST(LatentDistance, ContainmentIsZero) {
  const SparseCode<double> q(6, {{1, 2.0}, {3, -1.0}});
  const SparseCode<double> p(6, {{1, 2.0}, {3, -1.0}, {5, 4.0}});
  EXPECT_EQ(latent_distance(q, p, LatentMetric::SupportOverlap), 0.0);
  EXPECT_EQ(latent_distance(q, p, LatentMetric::MaskedEuclidean), 0.0);
}

TEST(LatentDistance, OverlapCounting) {
  const SparseCode<double> q(4, {{0, 1.0}, {1, 1.0}});
  const SparseCode<double> p(4, {{1, 1.0}, {2, 1.0}});
  EXPECT_EQ(latent_distance(q, p, LatentMetric::SupportOverlap), 1.0);
}

TEST(LatentDistance, MaskedMatchesDenseOracle) {
  Rng rng(3);
  for (int t = 0; t < 500; ++t) {
    const auto q = random_code(40, 0.3, true, rng);
    const auto p = random_code(40, 0.3, true, rng);
    EXPECT_NEAR(latent_distance(q, p, LatentMetric::MaskedEuclidean),
                oracle::masked_distance_dense(q.to_dense(), p.to_dense()), 1e-12);
  }
}

TEST(LatentDistance, OverlapIgnoresValues) {
  Rng rng(4);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    const auto q = random_code(30, 0.4, false, rng);
    const auto p = random_code(30, 0.4, false, rng);
    auto reval = [&](const SparseCode<double>& c) {
      std::vector<Entry<double>> e;
      for (const auto& x : c.entries()) e.push_back({x.index, n(rng) + 100.0});
      return SparseCode<double>(c.length(), e);
    };
    EXPECT_EQ(latent_distance(q, p, LatentMetric::SupportOverlap),
              latent_distance(reval(q), reval(p), LatentMetric::SupportOverlap));
  }
}

TEST(LatentDistance, DimensionMismatch) {
  expect_error(Errc::DimensionMismatch, [] {
    latent_distance(SparseCode<double>(3), SparseCode<double>(4), LatentMetric::SupportOverlap);
  });
}

TEST(SearchIndex, RejectsDuplicateIds) {
  std::vector<IndexedCode<double>> items{{1, AmbiguatedCode<double>(SparseCode<double>(4), 0)},
                                         {1, AmbiguatedCode<double>(SparseCode<double>(4), 0)}};
  expect_error(Errc::InvalidArgument,
               [&] { SearchIndex<double>(items, LatentMetric::SupportOverlap, 1.0, 0.0); });
}

TEST(SearchIndex, RejectsMixedLengths) {
  std::vector<IndexedCode<double>> items{{1, AmbiguatedCode<double>(SparseCode<double>(4), 0)},
                                         {2, AmbiguatedCode<double>(SparseCode<double>(5), 0)}};
  expect_error(Errc::DimensionMismatch,
               [&] { SearchIndex<double>(items, LatentMetric::SupportOverlap, 1.0, 0.0); });
}

TEST(BallQuery, LargeRadiusReturnsAll) {
  Rng rng(5);
  const auto idx = SearchIndex<double>::from_codes(random_codes(50, 20, true, rng),
                                                   LatentMetric::SupportOverlap, 1e9, 0.0);
  const auto got = ball_query(idx, random_code(20, 0.3, true, rng));
  std::vector<Id> all(50);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(got, all);
}

TEST(BallQuery, ZeroRadiusExactSupport) {
  std::vector<AmbiguatedCode<double>> codes{
      AmbiguatedCode<double>(SparseCode<double>(6, {{0, 1.0}, {1, 1.0}}), 0),
      AmbiguatedCode<double>(SparseCode<double>(6, {{2, 1.0}, {4, -1.0}}), 0),
      AmbiguatedCode<double>(SparseCode<double>(6, {{3, 1.0}}), 0)};
  const auto idx = SearchIndex<double>::from_codes(codes, LatentMetric::SupportOverlap, 0.0, 0.0);
  EXPECT_EQ(ball_query(idx, SparseCode<double>(6, {{2, 1.0}, {4, 1.0}})), (std::vector<Id>{1}));
}

TEST(BallQuery, MatchesLinearScanOracle) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = std::uniform_int_distribution<Index>(1, 500)(rng);
    const auto metric = trial % 2 ? LatentMetric::SupportOverlap : LatentMetric::MaskedEuclidean;
    const auto codes = random_codes(m, 24, trial % 3 == 0, rng);
    const auto q = random_code(24, 0.3, trial % 3 == 0, rng);
    std::vector<double> d;
    for (const auto& c : codes) d.push_back(dense_distance(q, c, metric));
    const double r = stats::quantile(d, 0.5);
    std::vector<Id> want;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] <= r) want.push_back(Id(i));
    const auto idx = SearchIndex<double>::from_codes(codes, metric, r, 0.0);
    ASSERT_EQ(ball_query(idx, q), want) << "trial " << trial;
  }
}

TEST(BallQuery, MonotoneInRadius) {
  Rng rng(7);
  const auto idx = SearchIndex<double>::from_codes(random_codes(300, 32, false, rng),
                                                   LatentMetric::MaskedEuclidean, 0.0, 0.0);
  for (int t = 0; t < 20; ++t) {
    const auto q = random_code(32, 0.3, false, rng);
    std::vector<Id> prev;
    for (double r = 0.0; r < 6.0; r += 0.25) {
      const auto cur = ball_query(idx, q, r);
      ASSERT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = cur;
    }
  }
}

TEST(BallQuery, IdsSortedRegardlessOfInsertionOrder) {
  std::vector<IndexedCode<double>> items{{9, AmbiguatedCode<double>(SparseCode<double>(3, {{0, 1.0}}), 0)},
                                         {2, AmbiguatedCode<double>(SparseCode<double>(3, {{0, 1.0}}), 0)},
                                         {5, AmbiguatedCode<double>(SparseCode<double>(3, {{1, 1.0}}), 0)}};
  const SearchIndex<double> idx(items, LatentMetric::SupportOverlap, 0.0, 0.0);
  EXPECT_EQ(ball_query(idx, SparseCode<double>(3, {{0, -1.0}})), (std::vector<Id>{2, 9}));
}

TEST(FairSample, SingleCandidate) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) EXPECT_EQ(fair_sample({42}, rng).chosen_id, 42);
}

TEST(FairSample, EmptyNeighborhood) {
  Rng rng(9);
  expect_error(Errc::EmptyNeighborhood, [&] { fair_sample({}, rng); });
}

TEST(FairSample, UniformWithinBand) {
  Rng rng(10);
  std::vector<Id> cand{3, 8, 11, 20, 21, 40, 41, 57, 60, 99};
  std::vector<std::uint64_t> counts(cand.size(), 0);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const auto r = fair_sample(cand, rng);
    ASSERT_EQ(r.neighborhood_size, 10);
    const auto it = std::find(cand.begin(), cand.end(), r.chosen_id);
    ASSERT_NE(it, cand.end());
    ++counts[std::size_t(it - cand.begin())];
  }
  for (auto c : counts) {
    const double f = double(c) / draws;
    EXPECT_GE(f, 1.0 / (10 * 1.05));
    EXPECT_LE(f, 1.05 / 10);
  }
  EXPECT_GT(stats::chi_square_uniform_pvalue(counts), 0.01);
}

TEST(Knn, FullKIsSortedPermutation) {
  Rng rng(11);
  const auto codes = random_codes(60, 16, true, rng);
  const auto idx = SearchIndex<double>::from_codes(codes, LatentMetric::SupportOverlap, 0.0, 0.0);
  const auto q = random_code(16, 0.3, true, rng);
  const auto got = knn(idx, q, 60);
  ASSERT_EQ(got.size(), 60u);
  for (std::size_t i = 1; i < got.size(); ++i) {
    const double a = latent_distance(q, codes[got[i - 1]], LatentMetric::SupportOverlap);
    const double b = latent_distance(q, codes[got[i]], LatentMetric::SupportOverlap);
    EXPECT_TRUE(a < b || (a == b && got[i - 1] < got[i]));
  }
}

TEST(Knn, StoredCodeRanksFirst) {
  Rng rng(12);
  auto codes = random_codes(40, 32, true, rng);
  const auto idx = SearchIndex<double>::from_codes(codes, LatentMetric::SupportOverlap, 0.0, 0.0);
  // Id 0 may tie at distance 0 only with a superset support; pick a code no
  // other code contains.
  for (Id target = 0; target < 40; ++target) {
    const auto& q = codes[target];
    bool unique = true;
    for (Id other = 0; other < target; ++other)
      unique &= latent_distance(q, codes[other], LatentMetric::SupportOverlap) > 0;
    if (!unique) continue;
    EXPECT_EQ(knn(idx, q, 1).front(), target);
  }
}

TEST(Knn, MatchesFullSortOracle) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = std::uniform_int_distribution<Index>(1, 500)(rng);
    const auto metric = trial % 2 ? LatentMetric::SupportOverlap : LatentMetric::MaskedEuclidean;
    const auto codes = random_codes(m, 20, trial % 3 == 0, rng);
    const auto q = random_code(20, 0.3, trial % 3 == 0, rng);
    std::vector<std::pair<double, Id>> all;
    for (Index i = 0; i < m; ++i) all.push_back({dense_distance(q, codes[i], metric), Id(i)});
    std::sort(all.begin(), all.end());
    const Index k = std::uniform_int_distribution<Index>(1, m)(rng);
    std::vector<Id> want;
    for (Index i = 0; i < k; ++i) want.push_back(all[i].second);
    const auto idx = SearchIndex<double>::from_codes(codes, metric, 0.0, 0.0);
    ASSERT_EQ(knn(idx, q, k), want) << "trial " << trial;
  }
}

TEST(Knn, PrefixConsistent) {
  Rng rng(14);
  const auto idx = SearchIndex<double>::from_codes(random_codes(80, 16, true, rng),
                                                   LatentMetric::SupportOverlap, 0.0, 0.0);
  const auto q = random_code(16, 0.3, true, rng);
  for (Index k = 1; k < 80; ++k) {
    const auto a = knn(idx, q, k);
    const auto b = knn(idx, q, k + 1);
    ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << "k=" << k;
  }
}

TEST(Knn, RejectsBadK) {
  Rng rng(15);
  const auto idx = SearchIndex<double>::from_codes(random_codes(5, 8, true, rng),
                                                   LatentMetric::SupportOverlap, 0.0, 0.0);
  expect_error(Errc::InvalidArgument, [&] { knn(idx, SparseCode<double>(8), 0); });
  expect_error(Errc::InvalidArgument, [&] { knn(idx, SparseCode<double>(8), 6); });
}

TEST(RecallAtT, Examples) {
  EXPECT_EQ(recall_at_t({1, 2, 3}, {5, 3, 2, 1}), 1.0);
  EXPECT_EQ(recall_at_t({1, 2, 3}, {4, 5}), 0.0);
  std::vector<Id> gt(10), retrieved(100);
  std::iota(gt.begin(), gt.end(), 0);
  std::iota(retrieved.begin(), retrieved.end(), 3);
  EXPECT_DOUBLE_EQ(recall_at_t(gt, retrieved), 0.7);
}

TEST(RecallAtT, EmptyGroundTruth) {
  expect_error(Errc::EmptyGroundTruth, [] { recall_at_t({}, {1}); });
}

}  // namespace
}  // namespace sca
