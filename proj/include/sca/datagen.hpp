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

// Seeded synthetic data. Every sigma here is a standard deviation. Column m
// is generated from its own engine seeded by mix(seed, m), so output does not
// depend on generation order.

#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sca/core.hpp"

namespace sca {

struct IidGaussian {
  double sigma = 1.0;
};

struct Ar1 {
  double rho = 0.5;
  double sigma = 1.0;
};

struct GaussianClusters {
  Index k = 4;
  // Centers are drawn i.i.d. N(0, center_spread^2) per coordinate.
  double center_spread = 2.0;
  double within_sigma = 1.0;
};

struct SyntheticSpec {
  std::variant<IidGaussian, Ar1, GaussianClusters> kind;
  Index n_dims = 1;
  Index n_points = 1;
  std::uint64_t seed = 0;
};

struct LabeledData {
  MatrixXd x;
  std::vector<int> labels;
};

// splitmix64 finalizer; also used to derive per-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

MatrixXd gen_gaussian(const SyntheticSpec& spec);
MatrixXd gen_ar1(const SyntheticSpec& spec);
LabeledData gen_clusters(const SyntheticSpec& spec);

/// Dispatches on spec.kind; labels are empty for unclustered data.
LabeledData generate(const SyntheticSpec& spec);

/// y = x + z, z ~ N(0, sigma_z^2 I).
VectorXd gen_authorized_query(const Eigen::Ref<const VectorXd>& x, double sigma_z, Rng& rng);

/// Fresh N(0, sigma^2 I) vector, independent of any database.
VectorXd gen_unauthorized_query(Index n_dims, double sigma, Rng& rng);

}  // namespace sca
