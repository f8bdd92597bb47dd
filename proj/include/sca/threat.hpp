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

// Leakage measurements: reconstruction by authorized and unauthorized
// parties, support robustness, clustering leakage and (beta, gamma)
// recoverability.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sca/ambiguation.hpp"
#include "sca/codec.hpp"
#include "sca/core.hpp"
#include "sca/transform.hpp"

namespace sca {

/// ||x - xhat||^2 / ||x||^2. Throws ZeroReference for x = 0.
double normalized_mse(const Eigen::Ref<const VectorXd>& x, const Eigen::Ref<const VectorXd>& xhat);

/// Column mean of normalized_mse.
double mean_normalized_mse(const MatrixXd& x, const MatrixXd& xhat);

struct SupportStats {
  double p_c = 0.0;
  double p_m = 0.0;
};

/// p_c = sum_m |supp(phi(x(m))) ∩ supp(phi(y(m)))| / (M * S_x), p_m = 1 - p_c.
SupportStats support_match_probabilities(const MatrixXd& x, const MatrixXd& y,
                                         const SparsifyingTransform<double>& t);

/// Unauthorized estimate: every released code decoded as is.
MatrixXd reconstruction_attack(std::span<const AmbiguatedCode<double>> codes, const Decoder<double>& d);

/// Authorized estimate: code m is purified with keys[m] before decoding.
MatrixXd reconstruction_attack(std::span<const AmbiguatedCode<double>> codes, const Decoder<double>& d,
                               std::span<const Support> keys);

struct PipelineConfig {
  Index code_len = 0;
  LearningConfig learning;
  // Orthonormal when L <= N, ridge otherwise, unless set.
  std::optional<DecoderMode> decoder_mode;
  double beta_r = 1.0;
  double beta = 1e-8;
  bool ternary = false;
  // Rescale reconstructions by one global least-squares factor.
  bool rescale = false;
  // Release policy; learning always uses TopS at the requested S_x.
  std::optional<EncodingPolicy> encoding;
};

/// Transform, decoder and noise model learned for one sparsity level.
struct Pipeline {
  SparsifyingTransform<double> transform;
  Decoder<double> decoder;
  Codebook<double> codebook;
  NoiseModel<double> noise;
  bool ternary = false;
  bool rescale = false;

  SparseCode<double> encode(const Eigen::Ref<const VectorXd>& x) const;
  Codebook<double> encode_all(const MatrixXd& x) const;
};

/// Learns W at sparsity s_x (decoder on the real-valued codebook) and
/// encodes x with it.
Pipeline build_pipeline(const MatrixXd& x, const PipelineConfig& cfg, Index s_x);

struct DistortionRow {
  Index s_x = 0;
  Index s_p = 0;
  double authorized_mse = 0.0;
  double unauthorized_mse = 0.0;
};

/// One row per (S_x, S_p): learn, encode, ambiguate and decode with and
/// without the support key; normalized MSE averaged over columns.
std::vector<DistortionRow> distortion_sparsity_curve(const MatrixXd& x,
                                                     std::span<const std::pair<Index, Index>> sweep,
                                                     const PipelineConfig& cfg, std::uint64_t seed);

/// Splits all pairwise Euclidean column distances into intra- and
/// inter-cluster samples and returns D(P_intra || P_inter) from 64-bin
/// shared histograms.
double cluster_leakage(const MatrixXd& vectors, std::span<const int> labels);

enum class UnauthorizedStrategy {
  // Decode the full released code.
  FullDecode,
  // Purify with the support of the adversary's own query.
  QuerySupport,
};

struct RecoverabilityOptions {
  // Ambiguation redraws averaged per query.
  int redraws = 1;
  UnauthorizedStrategy strategy = UnauthorizedStrategy::FullDecode;
  std::uint64_t seed = 0;
};

struct RecoverabilityResult {
  double p_e_auth = 0.0;
  double p_e_unauth = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  // Literal conditions: (i) p_e_auth < gamma, (ii) p_e_unauth >= gamma.
  bool passes_i = false;
  bool passes_ii = false;
  std::vector<double> auth_distortions;
  std::vector<double> unauth_distortions;
};

/// Query j targets database point j. Authorized reconstruction purifies the
/// released code with the support of the authorized query; the unauthorized
/// one follows `options.strategy`. Distortion is normalized MSE.
RecoverabilityResult recoverability_test(const MatrixXd& x, const MatrixXd& auth_queries,
                                         const MatrixXd& unauth_queries, const Pipeline& pipeline,
                                         Index s_p, double beta, double gamma,
                                         const RecoverabilityOptions& options = {});

struct LeakageReport {
  std::vector<DistortionRow> rows;
  SupportStats support;
  double kl_intra_inter = 0.0;
  std::optional<RecoverabilityResult> recoverability;
};

}  // namespace sca
