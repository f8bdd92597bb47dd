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

#include "sca/datagen.hpp"

#include <cmath>
#include <random>

namespace sca {

namespace {

void check_shape(const SyntheticSpec& spec) {
  require(spec.n_dims >= 1 && spec.n_points >= 1, Errc::InvalidArgument,
          "n_dims and n_points must be >= 1");
}

// Stream 0 is reserved for cluster centers.
Rng column_rng(const SyntheticSpec& spec, Index m) {
  return Rng(mix_seed(spec.seed, std::uint64_t(m) + 1));
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MatrixXd gen_gaussian(const SyntheticSpec& spec) {
  check_shape(spec);
  const auto* kind = std::get_if<IidGaussian>(&spec.kind);
  require(kind != nullptr, Errc::InvalidArgument, "spec is not i.i.d. Gaussian");
  require(kind->sigma > 0, Errc::InvalidArgument, "sigma must be > 0");
  MatrixXd x(spec.n_dims, spec.n_points);
  for (Index m = 0; m < spec.n_points; ++m) {
    Rng rng = column_rng(spec, m);
    std::normal_distribution<double> normal(0.0, kind->sigma);
    for (Index i = 0; i < spec.n_dims; ++i) x(i, m) = normal(rng);
  }
  return x;
}

MatrixXd gen_ar1(const SyntheticSpec& spec) {
  check_shape(spec);
  const auto* kind = std::get_if<Ar1>(&spec.kind);
  require(kind != nullptr, Errc::InvalidArgument, "spec is not AR(1)");
  require(std::abs(kind->rho) < 1.0, Errc::InvalidArgument, "|rho| must be < 1");
  require(kind->sigma > 0, Errc::InvalidArgument, "sigma must be > 0");
  const double stationary = kind->sigma / std::sqrt(1.0 - kind->rho * kind->rho);
  MatrixXd x(spec.n_dims, spec.n_points);
  for (Index m = 0; m < spec.n_points; ++m) {
    Rng rng = column_rng(spec, m);
    std::normal_distribution<double> normal(0.0, 1.0);
    x(0, m) = stationary * normal(rng);
    for (Index i = 1; i < spec.n_dims; ++i) x(i, m) = kind->rho * x(i - 1, m) + kind->sigma * normal(rng);
  }
  return x;
}

LabeledData gen_clusters(const SyntheticSpec& spec) {
  check_shape(spec);
  const auto* kind = std::get_if<GaussianClusters>(&spec.kind);
  require(kind != nullptr, Errc::InvalidArgument, "spec is not clustered");
  require(kind->k >= 2, Errc::InvalidArgument, "need at least 2 clusters");
  require(kind->center_spread > 0 && kind->within_sigma >= 0, Errc::InvalidArgument,
          "center_spread must be > 0 and within_sigma >= 0");

  Rng center_rng(mix_seed(spec.seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd centers(spec.n_dims, kind->k);
  for (Index c = 0; c < kind->k; ++c)
    for (Index i = 0; i < spec.n_dims; ++i) centers(i, c) = kind->center_spread * normal(center_rng);

  LabeledData out{MatrixXd(spec.n_dims, spec.n_points), std::vector<int>(spec.n_points)};
  // Contiguous blocks of near-equal size.
  for (Index m = 0; m < spec.n_points; ++m) {
    const int label = static_cast<int>((m * kind->k) / spec.n_points);
    out.labels[m] = label;
    Rng rng = column_rng(spec, m);
    for (Index i = 0; i < spec.n_dims; ++i)
      out.x(i, m) = centers(i, label) + kind->within_sigma * normal(rng);
  }
  return out;
}

LabeledData generate(const SyntheticSpec& spec) {
  if (std::holds_alternative<IidGaussian>(spec.kind)) return {gen_gaussian(spec), {}};
  if (std::holds_alternative<Ar1>(spec.kind)) return {gen_ar1(spec), {}};
  return gen_clusters(spec);
}

VectorXd gen_authorized_query(const Eigen::Ref<const VectorXd>& x, double sigma_z, Rng& rng) {
  require(sigma_z >= 0, Errc::InvalidArgument, "sigma_z must be >= 0");
  VectorXd y = x;
  if (sigma_z == 0) return y;
  std::normal_distribution<double> normal(0.0, sigma_z);
  for (Index i = 0; i < y.size(); ++i) y[i] += normal(rng);
  return y;
}

VectorXd gen_unauthorized_query(Index n_dims, double sigma, Rng& rng) {
  require(n_dims >= 1, Errc::InvalidArgument, "n_dims must be >= 1");
  require(sigma > 0, Errc::InvalidArgument, "sigma must be > 0");
  std::normal_distribution<double> normal(0.0, sigma);
  VectorXd y(n_dims);
  for (Index i = 0; i < n_dims; ++i) y[i] = normal(rng);
  return y;
}

}  // namespace sca
