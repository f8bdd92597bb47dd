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

#include "sca/cli/studies.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "sca/search.hpp"
#include "sca/stats.hpp"

namespace sca::cli {

namespace {

double data_sigma(const SyntheticSpec& spec) {
  if (const auto* g = std::get_if<IidGaussian>(&spec.kind)) return g->sigma;
  if (const auto* a = std::get_if<Ar1>(&spec.kind)) return a->sigma / std::sqrt(1 - a->rho * a->rho);
  return 1.0;
}

SparseCode<double> probe_for(const Pipeline& p, const Eigen::Ref<const VectorXd>& y, Index s_q, Index s_p,
                             Rng& rng) {
  return ambiguate_query(p.encode(y), std::min(s_q, s_p), s_p, p.noise, rng);
}

std::vector<Id> euclidean_nearest(const MatrixXd& x, const VectorXd& y, Index r) {
  std::vector<std::pair<double, Id>> d;
  d.reserve(std::size_t(x.cols()));
  for (Index m = 0; m < x.cols(); ++m) d.push_back({(x.col(m) - y).squaredNorm(), Id(m)});
  std::partial_sort(d.begin(), d.begin() + r, d.end());
  std::vector<Id> out;
  for (Index i = 0; i < r; ++i) out.push_back(d[std::size_t(i)].second);
  return out;
}

template <typename Row, typename F>
void emit(std::ostream& out, const std::string& header, const std::vector<Row>& rows, F cells) {
  out << header << "\n";
  for (const auto& r : rows) {
    const std::vector<std::string> c = cells(r);
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
    out << "\n";
  }
}

std::string str(Index v) { return std::to_string(v); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double resolve_radius(const ExperimentConfig& cfg, const std::vector<double>& distances) {
  if (cfg.radius) return *cfg.radius;
  require(!distances.empty(), Errc::InvalidArgument, "no distances to take a radius quantile of");
  return stats::quantile(distances, cfg.radius_quantile.value_or(0.01));
}

std::vector<DistancePair> distance_preservation(const ExperimentConfig& cfg) {
  const MatrixXd x = generate(cfg.data).x;
  const Pipeline p = build_pipeline(x, cfg.pipeline(), cfg.s_x.front());
  const auto [lo, hi] = std::minmax_element(cfg.sigma_z.begin(), cfg.sigma_z.end());
  std::uniform_real_distribution<double> scale(*lo, *hi);
  Rng queries(stream_seed(cfg, Stream::Queries));
  Rng noise(stream_seed(cfg, Stream::Ambiguation));
  const Index s_p = cfg.s_p.front();
  const LatentMetric metric = cfg.effective_metric();
  std::vector<DistancePair> out;
  out.reserve(std::size_t(x.cols()));
  for (Index m = 0; m < x.cols(); ++m) {
    const double sz = *lo == *hi ? *lo : scale(queries);
    const VectorXd y = gen_authorized_query(x.col(m), sz, queries);
    const auto stored = ambiguate(p.codebook.columns[std::size_t(m)], s_p, p.noise, noise);
    const auto probe = probe_for(p, y, cfg.s_q, s_p, noise);
    out.push_back({sz, (x.col(m) - y).norm(), latent_distance(probe, stored, metric)});
  }
  return out;
}

IsometrySummary isometry_summary(const std::vector<DistancePair>& pairs) {
  require(pairs.size() >= 4, Errc::InvalidArgument, "need at least 4 pairs");
  std::vector<double> ds;
  for (const auto& p : pairs) ds.push_back(p.d_s);
  const double median = stats::quantile(ds, 0.5);
  std::vector<double> ns, nt, fs, ft;
  for (const auto& p : pairs) {
    if (p.d_s < median) {
      ns.push_back(p.d_s);
      nt.push_back(p.d_t);
    } else {
      fs.push_back(p.d_s);
      ft.push_back(p.d_t);
    }
  }
  return {median, stats::spearman(ns, nt), stats::spearman(fs, ft)};
}

std::vector<RobustnessRow> support_robustness(const ExperimentConfig& cfg) {
  require(!cfg.lambda, Errc::Config, "support-robustness requires the top_s policy");
  const MatrixXd x = generate(cfg.data).x;
  const Index s_x = cfg.s_x.front();
  LearningConfig learning = cfg.pipeline().learning;
  learning.s_x = s_x;
  const auto learned = learn_transform(x, cfg.code_len, learning);
  const SparsifyingTransform<double> identity(MatrixXd::Identity(cfg.code_len, x.rows()), TopS{s_x});
  const MatrixXd base = x.leftCols(cfg.n_queries);
  std::vector<RobustnessRow> out;
  for (double sz : cfg.sigma_z) {
    Rng rng(stream_seed(cfg, Stream::Queries));
    MatrixXd y(base.rows(), base.cols());
    for (Index m = 0; m < base.cols(); ++m) y.col(m) = gen_authorized_query(base.col(m), sz, rng);
    out.push_back({sz, support_match_probabilities(base, y, learned.transform),
                   support_match_probabilities(base, y, identity)});
  }
  return out;
}

std::vector<DistortionRow> distortion_sparsity(const ExperimentConfig& cfg) {
  const MatrixXd x = generate(cfg.data).x;
  std::vector<std::pair<Index, Index>> sweep;
  for (Index s_x : cfg.s_x)
    for (Index s_p : cfg.s_p) sweep.push_back({s_x, s_p});
  return distortion_sparsity_curve(x, sweep, cfg.pipeline(), stream_seed(cfg, Stream::Ambiguation));
}

std::vector<LeakageRow> clustering_leakage(const ExperimentConfig& cfg) {
  require(std::holds_alternative<GaussianClusters>(cfg.data.kind), Errc::Config,
          "clustering-leakage requires data.kind = clusters");
  const LabeledData d = generate(cfg.data);
  const Index s_x = cfg.s_x.front();
  const Pipeline p = build_pipeline(d.x, cfg.pipeline(), s_x);
  std::vector<LeakageRow> out;
  out.push_back({"original", 0, cluster_leakage(d.x, d.labels)});
  out.push_back({"clean", 0, cluster_leakage(p.codebook.to_dense(), d.labels)});
  const auto levels = ambiguation_levels(cfg.code_len, s_x);
  std::set<Index> budgets(cfg.s_p.begin(), cfg.s_p.end());
  budgets.insert(levels.half);
  budgets.insert(levels.full);
  for (Index s_p : budgets) {
    Rng rng(mix_seed(stream_seed(cfg, Stream::Ambiguation), std::uint64_t(s_p)));
    const auto released = ambiguate_all(p.codebook, s_p, p.noise, rng);
    MatrixXd noisy(cfg.code_len, d.x.cols()), purified(cfg.code_len, d.x.cols());
    for (Index m = 0; m < d.x.cols(); ++m) {
      const auto& code = released[std::size_t(m)];
      noisy.col(m) = code.to_dense();
      purified.col(m) = purify(code, p.codebook.columns[std::size_t(m)].support()).to_dense();
    }
    out.push_back({"ambiguated", s_p, cluster_leakage(noisy, d.labels)});
    out.push_back({"purified", s_p, cluster_leakage(purified, d.labels)});
  }
  return out;
}

std::vector<RecallRow> recall(const ExperimentConfig& cfg) {
  const MatrixXd x = generate(cfg.data).x;
  const Pipeline p = build_pipeline(x, cfg.pipeline(), cfg.s_x.front());
  const Index m_total = x.cols();
  std::set<Index> ts(cfg.recall_t.begin(), cfg.recall_t.end());
  ts.insert(m_total);
  const double sz = cfg.sigma_z.front();
  std::vector<RecallRow> out;
  for (Index s_p : cfg.s_p) {
    Rng amb(mix_seed(stream_seed(cfg, Stream::Ambiguation), std::uint64_t(s_p)));
    const auto index = SearchIndex<double>::from_codes(ambiguate_all(p.codebook, s_p, p.noise, amb),
                                                       cfg.effective_metric(), 0.0, cfg.epsilon);
    Rng queries(stream_seed(cfg, Stream::Queries));
    std::vector<double> hits(ts.size(), 0.0);
    for (Index j = 0; j < cfg.n_queries; ++j) {
      const VectorXd y = gen_authorized_query(x.col(j), sz, queries);
      const auto truth = euclidean_nearest(x, y, cfg.recall_r);
      const auto ranked = knn(index, probe_for(p, y, cfg.s_q, s_p, queries), m_total);
      std::size_t k = 0;
      for (Index t : ts) {
        const std::vector<Id> top(ranked.begin(), ranked.begin() + t);
        hits[k++] += recall_at_t(truth, top);
      }
    }
    std::size_t k = 0;
    for (Index t : ts) out.push_back({s_p, cfg.recall_r, t, hits[k++] / double(cfg.n_queries)});
  }
  return out;
}

std::vector<FairnessRow> fairness(const ExperimentConfig& cfg) {
  const MatrixXd x = generate(cfg.data).x;
  const Pipeline p = build_pipeline(x, cfg.pipeline(), cfg.s_x.front());
  const Index s_p = cfg.s_p.front();
  Rng amb(stream_seed(cfg, Stream::Ambiguation));
  auto index = SearchIndex<double>::from_codes(ambiguate_all(p.codebook, s_p, p.noise, amb),
                                               cfg.effective_metric(), 0.0, cfg.epsilon);
  Rng queries(stream_seed(cfg, Stream::Queries));
  const VectorXd y = gen_authorized_query(x.col(0), cfg.sigma_z.front(), queries);
  const auto probe = probe_for(p, y, cfg.s_q, s_p, queries);
  const double r = resolve_radius(cfg, index.distances(probe));
  const auto candidates = ball_query(index, probe, r);
  require(!candidates.empty(), Errc::EmptyNeighborhood, "no such point: the query neighborhood is empty");
  Rng sampling(stream_seed(cfg, Stream::Sampling));
  std::vector<std::uint64_t> counts(candidates.size(), 0);
  for (Index t = 0; t < cfg.draws; ++t) {
    const auto res = fair_sample(candidates, sampling);
    ++counts[std::size_t(std::lower_bound(candidates.begin(), candidates.end(), res.chosen_id) - candidates.begin())];
  }
  std::vector<FairnessRow> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    out.push_back({candidates[i], counts[i], double(counts[i]) / double(cfg.draws)});
  return out;
}

RecoverabilityResult recoverability(const ExperimentConfig& cfg) {
  const MatrixXd x = generate(cfg.data).x;
  const Pipeline p = build_pipeline(x, cfg.pipeline(), cfg.s_x.front());
  Rng rng(stream_seed(cfg, Stream::Queries));
  MatrixXd auth(x.rows(), cfg.n_queries), unauth(x.rows(), cfg.n_queries);
  for (Index j = 0; j < cfg.n_queries; ++j) {
    auth.col(j) = gen_authorized_query(x.col(j), cfg.sigma_z.front(), rng);
    unauth.col(j) = gen_unauthorized_query(x.rows(), data_sigma(cfg.data), rng);
  }
  RecoverabilityOptions opts;
  opts.seed = stream_seed(cfg, Stream::Ambiguation);
  return recoverability_test(x, auth, unauth, p, cfg.s_p.front(), cfg.beta, cfg.gamma, opts);
}

void write_csv(std::ostream& out, const std::vector<DistancePair>& rows) {
  emit(out, "sigma_z,d_s,d_t", rows, [](const DistancePair& r) {
    return std::vector<std::string>{format_double(r.sigma_z), format_double(r.d_s), format_double(r.d_t)};
  });
}

void write_csv(std::ostream& out, const std::vector<RobustnessRow>& rows) {
  emit(out, "sigma_z,p_c_learned,p_m_learned,p_c_identity,p_m_identity", rows, [](const RobustnessRow& r) {
    return std::vector<std::string>{format_double(r.sigma_z), format_double(r.learned.p_c),
                                    format_double(r.learned.p_m), format_double(r.identity.p_c),
                                    format_double(r.identity.p_m)};
  });
}

void write_csv(std::ostream& out, const std::vector<DistortionRow>& rows) {
  emit(out, "s_x,s_p,authorized_mse,unauthorized_mse", rows, [](const DistortionRow& r) {
    return std::vector<std::string>{str(r.s_x), str(r.s_p), format_double(r.authorized_mse),
                                    format_double(r.unauthorized_mse)};
  });
}

void write_csv(std::ostream& out, const std::vector<LeakageRow>& rows) {
  emit(out, "domain,s_p,kl_intra_inter", rows, [](const LeakageRow& r) {
    return std::vector<std::string>{r.domain, str(r.s_p), format_double(r.kl)};
  });
}

void write_csv(std::ostream& out, const std::vector<RecallRow>& rows) {
  emit(out, "s_p,r,t,recall", rows, [](const RecallRow& r) {
    return std::vector<std::string>{str(r.s_p), str(r.r), str(r.t), format_double(r.recall)};
  });
}

void write_csv(std::ostream& out, const std::vector<FairnessRow>& rows) {
  emit(out, "id,count,frequency", rows, [](const FairnessRow& r) {
    return std::vector<std::string>{std::to_string(r.id), std::to_string(r.count), format_double(r.frequency)};
  });
}

void write_csv(std::ostream& out, const RecoverabilityResult& r) {
  out << "beta,gamma,p_e_auth,p_e_unauth,passes_i,passes_ii\n"
      << format_double(r.beta) << "," << format_double(r.gamma) << "," << format_double(r.p_e_auth) << ","
      << format_double(r.p_e_unauth) << "," << (r.passes_i ? "true" : "false") << ","
      << (r.passes_ii ? "true" : "false") << "\n";
}

void run_study(const std::string& name, const ExperimentConfig& cfg, std::ostream& csv) {
  if (name == "distance-preservation") {
    write_csv(csv, distance_preservation(cfg));
  } else if (name == "support-robustness") {
    write_csv(csv, support_robustness(cfg));
  } else if (name == "distortion-sparsity") {
    write_csv(csv, distortion_sparsity(cfg));
  } else if (name == "clustering-leakage") {
    write_csv(csv, clustering_leakage(cfg));
  } else if (name == "recall") {
    write_csv(csv, recall(cfg));
  } else if (name == "fairness") {
    write_csv(csv, fairness(cfg));
  } else if (name == "recoverability") {
    write_csv(csv, recoverability(cfg));
  } else {
    throw Error(Errc::Config, "--study: unknown study \"" + name + "\"");
  }
}

}  // namespace sca::cli
