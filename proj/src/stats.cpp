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

#include "sca/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "sca/core.hpp"

namespace sca::stats {

double mean(std::span<const double> v) {
  require(!v.empty(), Errc::InvalidArgument, "mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double quantile(std::span<const double> v, double q) {
  require(!v.empty(), Errc::InvalidArgument, "quantile of an empty sample");
  require(q >= 0 && q <= 1, Errc::InvalidArgument, "quantile must lie in [0, 1]");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * double(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - double(lo)) * (sorted[hi] - sorted[lo]);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, Errc::InvalidArgument,
          "correlation needs two equal-length samples of size >= 2");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * double(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

double chi_square_uniform_pvalue(std::span<const std::uint64_t> counts) {
  require(counts.size() >= 2, Errc::InvalidArgument, "need at least two cells");
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  require(total > 0, Errc::InvalidArgument, "no observations");
  const double expected = total / double(counts.size());
  double chi2 = 0.0;
  for (auto c : counts) chi2 += (double(c) - expected) * (double(c) - expected) / expected;
  const boost::math::chi_squared dist(double(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

double histogram_kl(std::span<const double> p_sample, std::span<const double> q_sample, int bins) {
  require(!p_sample.empty() && !q_sample.empty(), Errc::InvalidArgument, "empty sample");
  require(bins >= 1, Errc::InvalidArgument, "bins must be >= 1");
  double lo = p_sample[0], hi = p_sample[0];
  for (double v : p_sample) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : q_sample) lo = std::min(lo, v), hi = std::max(hi, v);
  require(hi > lo, Errc::DegenerateDistances, "all distances are equal");

  const double width = (hi - lo) / bins;
  auto fill = [&](std::span<const double> sample) {
    std::vector<double> h(bins, 1.0);
    for (double v : sample) {
      auto b = static_cast<int>((v - lo) / width);
      h[std::clamp(b, 0, bins - 1)] += 1.0;
    }
    const double total = double(sample.size()) + bins;
    for (double& c : h) c /= total;
    return h;
  };
  const auto p = fill(p_sample);
  const auto q = fill(q_sample);
  double kl = 0.0;
  for (int b = 0; b < bins; ++b) kl += p[b] * std::log(p[b] / q[b]);
  return std::max(kl, 0.0);
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), Errc::InvalidArgument, "empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    d = std::max(d, std::abs(double(i) / sa.size() - double(j) / sb.size()));
  }
  return d;
}

}  // namespace sca::stats
