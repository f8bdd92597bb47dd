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

#include "sca/threat.hpp"

#include <map>

#include "sca/datagen.hpp"
#include "sca/stats.hpp"

namespace sca {

double normalized_mse(const Eigen::Ref<const VectorXd>& x, const Eigen::Ref<const VectorXd>& xhat) {
  require(x.size() == xhat.size(), Errc::DimensionMismatch, "vector lengths differ");
  const double ref = x.squaredNorm();
  require(ref > 0, Errc::ZeroReference, "reference vector is zero");
  return (x - xhat).squaredNorm() / ref;
}

double mean_normalized_mse(const MatrixXd& x, const MatrixXd& xhat) {
  require(x.rows() == xhat.rows() && x.cols() == xhat.cols() && x.cols() > 0,
          Errc::DimensionMismatch, "matrices differ in shape");
  double sum = 0.0;
  for (Index m = 0; m < x.cols(); ++m) sum += normalized_mse(x.col(m), xhat.col(m));
  return sum / double(x.cols());
}

SupportStats support_match_probabilities(const MatrixXd& x, const MatrixXd& y,
                                         const SparsifyingTransform<double>& t) {
  require(x.rows() == y.rows() && x.cols() == y.cols() && x.cols() > 0, Errc::DimensionMismatch,
          "x " + shape_str(x.rows(), x.cols()) + " vs y " + shape_str(y.rows(), y.cols()));
  const auto* top = std::get_if<TopS>(&t.policy());
  require(top != nullptr, Errc::InvalidArgument, "support statistics require the TopS policy");
  std::uint64_t hits = 0;
  for (Index m = 0; m < x.cols(); ++m) {
    hits += support_intersection(encode(t, x.col(m)).support(), encode(t, y.col(m)).support()).size();
  }
  SupportStats s;
  s.p_c = double(hits) / (double(x.cols()) * double(top->s_x));
  s.p_m = 1.0 - s.p_c;
  return s;
}

MatrixXd reconstruction_attack(std::span<const AmbiguatedCode<double>> codes, const Decoder<double>& d) {
  MatrixXd out(d.n_dims(), Index(codes.size()));
  for (std::size_t m = 0; m < codes.size(); ++m) out.col(Index(m)) = decode(d, codes[m]);
  return out;
}

MatrixXd reconstruction_attack(std::span<const AmbiguatedCode<double>> codes, const Decoder<double>& d,
                               std::span<const Support> keys) {
  require(keys.size() == codes.size(), Errc::DimensionMismatch, "one key per code required");
  MatrixXd out(d.n_dims(), Index(codes.size()));
  for (std::size_t m = 0; m < codes.size(); ++m) out.col(Index(m)) = decode(d, purify(codes[m], keys[m]));
  return out;
}

SparseCode<double> Pipeline::encode(const Eigen::Ref<const VectorXd>& x) const {
  if (ternary) return sca::encode_ternary(transform, x);
  return sca::encode(transform, x);
}

Codebook<double> Pipeline::encode_all(const MatrixXd& x) const {
  return sca::encode_all(transform, x, ternary);
}

Pipeline build_pipeline(const MatrixXd& x, const PipelineConfig& cfg, Index s_x) {
  LearningConfig learning = cfg.learning;
  learning.s_x = s_x;
  auto learned = learn_transform(x, cfg.code_len, learning);
  const DecoderMode mode = cfg.decoder_mode.value_or(default_decoder_mode(learned.transform));
  Decoder<double> decoder = learn_decoder(learned.transform.w(), learned.codebook, x, cfg.beta_r,
                                          cfg.beta, mode);
  if (cfg.encoding) learned.transform = SparsifyingTransform<double>(learned.transform.w(), *cfg.encoding);
  Codebook<double> book = sca::encode_all(learned.transform, x, cfg.ternary);
  NoiseModel<double> noise = cfg.ternary ? NoiseModel<double>::make_ternary() : build_noise_model(book);
  return {std::move(learned.transform), std::move(decoder), std::move(book), std::move(noise),
          cfg.ternary, cfg.rescale};
}

namespace {

MatrixXd maybe_rescale(const MatrixXd& x, MatrixXd xhat, bool rescale) {
  if (!rescale) return xhat;
  const double denom = xhat.squaredNorm();
  if (denom > 0) xhat *= (xhat.cwiseProduct(x).sum() / denom);
  return xhat;
}

}  // namespace

std::vector<DistortionRow> distortion_sparsity_curve(const MatrixXd& x,
                                                     std::span<const std::pair<Index, Index>> sweep,
                                                     const PipelineConfig& cfg, std::uint64_t seed) {
  require(!sweep.empty(), Errc::InvalidArgument, "empty sweep");
  for (const auto& [s_x, s_p] : sweep) {
    require(s_x >= 1 && s_x <= cfg.code_len, Errc::InvalidArgument,
            "S_x=" + std::to_string(s_x) + " outside [1, L]");
    require(s_p >= 0 && s_p <= cfg.code_len - s_x, Errc::AmbiguationBudgetExceeded,
            "S_p=" + std::to_string(s_p) + " exceeds L - S_x");
  }
  std::map<Index, Pipeline> pipelines;
  std::vector<DistortionRow> rows;
  rows.reserve(sweep.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto [s_x, s_p] = sweep[i];
    auto it = pipelines.find(s_x);
    if (it == pipelines.end()) it = pipelines.emplace(s_x, build_pipeline(x, cfg, s_x)).first;
    const Pipeline& p = it->second;

    Rng rng(mix_seed(seed, std::uint64_t(i)));
    const auto released = ambiguate_all(p.codebook, s_p, p.noise, rng);
    std::vector<Support> keys;
    keys.reserve(p.codebook.columns.size());
    for (const auto& code : p.codebook.columns) keys.push_back(code.support());

    const MatrixXd auth = maybe_rescale(x, reconstruction_attack(released, p.decoder, keys), p.rescale);
    const MatrixXd unauth = maybe_rescale(x, reconstruction_attack(released, p.decoder), p.rescale);
    rows.push_back({s_x, s_p, mean_normalized_mse(x, auth), mean_normalized_mse(x, unauth)});
  }
  return rows;
}

double cluster_leakage(const MatrixXd& vectors, std::span<const int> labels) {
  require(Index(labels.size()) == vectors.cols(), Errc::DimensionMismatch, "one label per column");
  std::map<int, int> sizes;
  for (int l : labels) ++sizes[l];
  require(sizes.size() >= 2, Errc::InvalidArgument, "need at least 2 clusters");
  for (const auto& [label, count] : sizes) {
    require(count >= 2, Errc::InvalidArgument,
            "cluster " + std::to_string(label) + " has fewer than 2 members");
  }
  std::vector<double> intra, inter;
  for (Index i = 0; i < vectors.cols(); ++i) {
    for (Index j = i + 1; j < vectors.cols(); ++j) {
      const double d = (vectors.col(i) - vectors.col(j)).norm();
      (labels[i] == labels[j] ? intra : inter).push_back(d);
    }
  }
  return stats::histogram_kl(intra, inter, 64);
}

RecoverabilityResult recoverability_test(const MatrixXd& x, const MatrixXd& auth_queries,
                                         const MatrixXd& unauth_queries, const Pipeline& pipeline,
                                         Index s_p, double beta, double gamma,
                                         const RecoverabilityOptions& options) {
  require(beta >= 0, Errc::InvalidArgument, "beta must be >= 0");
  require(gamma >= 0 && gamma <= 1, Errc::InvalidArgument, "gamma must lie in [0, 1]");
  require(options.redraws >= 1, Errc::InvalidArgument, "redraws must be >= 1");
  require(auth_queries.cols() > 0 && unauth_queries.cols() > 0, Errc::EmptyQuerySet,
          "no queries supplied");
  require(auth_queries.cols() <= x.cols() && unauth_queries.cols() <= x.cols(),
          Errc::DimensionMismatch, "more queries than database points");
  require(auth_queries.rows() == x.rows() && unauth_queries.rows() == x.rows(),
          Errc::DimensionMismatch, "query dimension differs from data dimension");

  RecoverabilityResult r;
  r.beta = beta;
  r.gamma = gamma;
  Rng rng(options.seed);

  auto distortion = [&](Index j, const Support* key) {
    double sum = 0.0;
    for (int k = 0; k < options.redraws; ++k) {
      const auto released = ambiguate(pipeline.codebook.columns[j], s_p, pipeline.noise, rng);
      const VectorXd xhat = key ? decode(pipeline.decoder, purify(released, *key))
                                : decode(pipeline.decoder, released);
      sum += normalized_mse(x.col(j), xhat);
    }
    return sum / options.redraws;
  };

  for (Index j = 0; j < auth_queries.cols(); ++j) {
    const Support key = pipeline.encode(auth_queries.col(j)).support();
    r.auth_distortions.push_back(distortion(j, &key));
  }
  for (Index j = 0; j < unauth_queries.cols(); ++j) {
    if (options.strategy == UnauthorizedStrategy::QuerySupport) {
      const Support key = pipeline.encode(unauth_queries.col(j)).support();
      r.unauth_distortions.push_back(distortion(j, &key));
    } else {
      r.unauth_distortions.push_back(distortion(j, nullptr));
    }
  }
  auto fraction_within = [&](const std::vector<double>& d) {
    std::size_t within = 0;
    for (double v : d) within += v <= beta;
    return double(within) / double(d.size());
  };
  r.p_e_auth = fraction_within(r.auth_distortions);
  r.p_e_unauth = fraction_within(r.unauth_distortions);
  r.passes_i = r.p_e_auth < gamma;
  r.passes_ii = r.p_e_unauth >= gamma;
  return r;
}

}  // namespace sca
