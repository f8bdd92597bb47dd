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

#include <cstdint>
#include <span>
#include <vector>

namespace sca::stats {

double mean(std::span<const double> v);

/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::span<const double> v, double q);

double pearson(std::span<const double> a, std::span<const double> b);

/// Pearson correlation of average ranks (ties share their mean rank).
double spearman(std::span<const double> a, std::span<const double> b);

/// Upper-tail probability of Pearson's chi-square goodness-of-fit statistic
/// against the uniform law over counts.size() cells.
double chi_square_uniform_pvalue(std::span<const std::uint64_t> counts);

/// D(P || Q) for the two samples, estimated from shared-edge histograms over
/// the pooled range with add-one smoothing per bin, natural log. Throws
/// DegenerateDistances when the pooled range is empty.
double histogram_kl(std::span<const double> p_sample, std::span<const double> q_sample,
                    int bins = 64);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

}  // namespace sca::stats
