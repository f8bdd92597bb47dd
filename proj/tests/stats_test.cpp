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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "sca/stats.hpp"

namespace sca::stats {
namespace {

using sca::testing::expect_error;

TEST(Quantile, Interpolates) {
  const std::vector<double> v{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
}

TEST(Pearson, PerfectAndAnti) {
  const std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8}, c{4, 3, 2, 1};
  EXPECT_NEAR(pearson(a, b), 1.0, 1e-15);
  EXPECT_NEAR(pearson(a, c), -1.0, 1e-15);
}

TEST(Spearman, MonotoneIsOne) {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{1, 8, 27, 64, 125};
  EXPECT_NEAR(spearman(a, b), 1.0, 1e-15);
}

TEST(Spearman, TiesUseAverageRanks) {
  // ranks of b: 1.5 1.5 3 4; pearson against 1 2 3 4 by hand
  const std::vector<double> a{1, 2, 3, 4}, b{5, 5, 6, 7};
  const double want = 4.5 / std::sqrt(5.0 * 4.5);
  EXPECT_NEAR(spearman(a, b), want, 1e-12);
}

TEST(ChiSquare, PerfectFitIsOne) {
  const std::vector<std::uint64_t> c{10, 10, 10, 10};
  EXPECT_NEAR(chi_square_uniform_pvalue(c), 1.0, 1e-12);
}

TEST(ChiSquare, ClosedFormsForSmallDf) {
  // df = 1: p = erfc(sqrt(x / 2)); x = (10^2 + 10^2) / 10 = 20
  const std::vector<std::uint64_t> two{20, 0};
  EXPECT_NEAR(chi_square_uniform_pvalue(two), std::erfc(std::sqrt(10.0)), 1e-12);
  // df = 2: p = exp(-x / 2); expected 10 each, x = (4 + 1 + 1) / 10 = 0.6
  const std::vector<std::uint64_t> three{12, 9, 9};
  EXPECT_NEAR(chi_square_uniform_pvalue(three), std::exp(-0.3), 1e-12);
}

TEST(HistogramKl, HandComputedTwoBins) {
  // edges 0, 0.5, 1; smoothed p = (3, 2) / 5, q = (2, 3) / 5
  const std::vector<double> p{0, 0, 1}, q{0, 1, 1};
  const double want = 0.6 * std::log(1.5) + 0.4 * std::log(2.0 / 3.0);
  EXPECT_NEAR(histogram_kl(p, q, 2), want, 1e-14);
}

TEST(HistogramKl, SameLawIsSmall) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(20000), b(20000);
  for (auto& v : a) v = n(rng);
  for (auto& v : b) v = n(rng);
  EXPECT_LT(histogram_kl(a, b), 0.05);
}

TEST(HistogramKl, Degenerate) {
  const std::vector<double> a{1, 1}, b{1};
  expect_error(Errc::DegenerateDistances, [&] { histogram_kl(a, b); });
}

TEST(KsStatistic, HandComputed) {
  const std::vector<double> a{1, 2, 3, 4}, b{3, 4, 5, 6};
  EXPECT_DOUBLE_EQ(ks_statistic(a, b), 0.5);
  EXPECT_DOUBLE_EQ(ks_statistic(a, a), 0.0);
}

}  // namespace
}  // namespace sca::stats
