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

#include "sca/cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sca/cli/config.hpp"
#include "sca/cli/studies.hpp"
#include "sca/io.hpp"

namespace sca::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string study;
  std::string data;
  std::string codebook;
  std::string query;
  std::string transform;
  std::string decoder;
  std::string mode;
  std::optional<Index> s_q;
  std::optional<double> radius;
};

ExperimentConfig config_from(const Options& o) {
  ExperimentConfig cfg = o.config.empty() ? parse_config("{}") : load_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.data.seed = *o.seed;
  }
  if (!o.mode.empty()) cfg.mode = o.mode == "unauthorized" ? QueryMode::Unauthorized : QueryMode::Authorized;
  if (o.s_q) {
    if (*o.s_q < 0 || *o.s_q > cfg.s_p.front()) throw Error(Errc::Config, "--s-q: must lie in [0, S_p]");
    cfg.s_q = *o.s_q;
  }
  if (o.radius) {
    cfg.radius = *o.radius;
    cfg.radius_quantile.reset();
  }
  return cfg;
}

fs::path out_dir(const Options& o) {
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

EncodingPolicy policy_of(const ExperimentConfig& cfg) {
  if (cfg.lambda) return Threshold{*cfg.lambda};
  return TopS{cfg.s_x.front()};
}

void cmd_gen(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = config_from(o);
  const fs::path dir = out_dir(o);
  const LabeledData d = generate(cfg.data);
  io::write_matrix_file(dir / "data.scam", d.x);
  Rng rng(stream_seed(cfg, Stream::Queries));
  MatrixXd q(d.x.rows(), cfg.n_queries);
  for (Index j = 0; j < cfg.n_queries; ++j) q.col(j) = gen_authorized_query(d.x.col(j), cfg.sigma_z.front(), rng);
  io::write_matrix_file(dir / "queries.scam", q);
  if (std::holds_alternative<GaussianClusters>(cfg.data.kind)) {
    std::ofstream labels(dir / "labels.csv");
    labels << "id,label\n";
    for (std::size_t m = 0; m < d.labels.size(); ++m) labels << m << "," << d.labels[m] << "\n";
    if (!labels) throw Error(Errc::Io, "write error on labels.csv");
  }
  out << "N=" << d.x.rows() << " M=" << d.x.cols() << " queries=" << q.cols() << "\n";
}

void cmd_owner_prepare(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = config_from(o);
  const MatrixXd x = o.data.empty() ? generate(cfg.data).x : io::read_matrix_file(o.data);
  if (cfg.code_len < x.rows()) {
    throw Error(Errc::Config, "code_len: L=" + std::to_string(cfg.code_len) +
                                  " must be >= data dimension " + std::to_string(x.rows()));
  }
  const Index s_x = cfg.s_x.front();
  const Index s_p = cfg.s_p.front();
  PipelineConfig pc = cfg.pipeline();
  if (!cfg.beta1_set) pc.learning.beta1 = double(x.cols());
  const Pipeline p = build_pipeline(x, pc, s_x);
  Rng rng(stream_seed(cfg, Stream::Ambiguation));
  const auto released = ambiguate_all(p.codebook, s_p, p.noise, rng);
  const fs::path dir = out_dir(o);
  io::write_matrix_file(dir / "transform.scam", p.transform.w());
  io::write_matrix_file(dir / "decoder.scam", p.decoder.r);
  io::write_code_file(dir / "codebook.scac",
                      io::CodeFile{cfg.code_len, std::vector<SparseCode<double>>(released.begin(), released.end())});
  out << "L=" << cfg.code_len << " S_x=" << s_x << " S_p=" << s_p << " N=" << x.rows() << " M=" << x.cols()
      << "\n";
}

void cmd_server_index(const Options& o, std::ostream& out) {
  const io::CodeFile f = io::read_code_file(o.codebook);
  if (f.codes.empty()) throw Error(Errc::EmptyCodebook, "codebook " + o.codebook + " holds no codes (M=0)");
  double nnz = 0.0;
  for (const auto& c : f.codes) nnz += double(c.nnz());
  out << "M=" << f.codes.size() << " L=" << f.code_len
      << " mean_nnz=" << format_double(nnz / double(f.codes.size())) << "\n";
}

void cmd_user_query(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = config_from(o);
  const MatrixXd w = io::read_matrix_file(o.transform);
  const MatrixXd r = io::read_matrix_file(o.decoder);
  const MatrixXd queries = io::read_matrix_file(o.query);
  const io::CodeFile book = io::read_code_file(o.codebook);
  if (book.codes.empty()) throw Error(Errc::EmptyCodebook, "codebook " + o.codebook + " holds no codes (M=0)");
  require(w.rows() == book.code_len, Errc::DimensionMismatch, "transform has L=" + std::to_string(w.rows()) +
                                                                  ", codebook has L=" + std::to_string(book.code_len));
  require(r.rows() == w.cols() && r.cols() == w.rows(), Errc::DimensionMismatch,
          "decoder shape " + shape_str(r.rows(), r.cols()) + " does not match transform " +
              shape_str(w.rows(), w.cols()));
  require(queries.rows() == w.cols(), Errc::DimensionMismatch,
          "query dimension " + std::to_string(queries.rows()) + " vs transform N=" + std::to_string(w.cols()));

  const SparsifyingTransform<double> t(w, policy_of(cfg));
  const Decoder<double> d{r, DecoderMode::Ridge, cfg.beta_r, cfg.decoder_beta};
  // The user only sees the published codebook; its magnitudes are the best
  // available model of the noise law.
  Codebook<double> published{book.code_len, book.codes};
  const NoiseModel<double> model = cfg.ternary ? NoiseModel<double>::make_ternary() : build_noise_model(published);
  std::vector<AmbiguatedCode<double>> stored;
  stored.reserve(book.codes.size());
  for (const auto& c : book.codes) stored.emplace_back(c, 0);
  const auto index = SearchIndex<double>::from_codes(stored, cfg.effective_metric(), 0.0, cfg.epsilon);

  Rng noise(stream_seed(cfg, Stream::Queries));
  Rng sampling(stream_seed(cfg, Stream::Sampling));
  io::CodeFile probes{book.code_len, {}};
  for (Index j = 0; j < queries.cols(); ++j) {
    const VectorXd y = queries.col(j);
    const SparseCode<double> b = cfg.ternary ? SparseCode<double>(encode_ternary(t, y)) : encode(t, y);
    const auto probe = ambiguate_query(b, cfg.s_q, cfg.s_p.front(), model, noise);
    probes.codes.push_back(probe);
    const double radius = resolve_radius(cfg, index.distances(probe));
    const auto candidates = ball_query(index, probe, radius);
    out << "query " << j << ": ";
    if (candidates.empty()) {
      out << "no such point (empty neighborhood at r=" << format_double(radius) << ")\n";
      continue;
    }
    const QueryResult res = fair_sample(candidates, sampling);
    const auto& returned = index.codes()[std::size_t(res.chosen_id)].code;
    const VectorXd xhat = cfg.mode == QueryMode::Authorized ? decode(d, purify(returned, b.support()))
                                                            : decode(d, SparseCode<double>(returned));
    out << "id=" << res.chosen_id << " neighborhood=" << res.neighborhood_size
        << " r=" << format_double(radius) << " distortion=" << format_double(normalized_mse(y, xhat)) << "\n";
  }
  io::write_code_file(out_dir(o) / "probe.scac", probes);
}

void cmd_experiment(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = config_from(o);
  const fs::path path = out_dir(o) / (o.study + ".csv");
  std::ostringstream csv;
  run_study(o.study, cfg, csv);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  f << csv.str();
  if (!f) throw Error(Errc::Io, "write error on " + path.string());
  out << "wrote " << path.string() << "\n";
}

void apply_thread_cap() {
  if (const char* env = std::getenv("SCA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
}

}  // namespace

int exit_code(Errc code) {
  switch (code) {
    case Errc::Io:
    case Errc::CorruptFile:
    case Errc::EmptyCodebook:
      return kExitIo;
    case Errc::SingularTransform:
    case Errc::InfeasibleCodebook:
    case Errc::LineSearchFailed:
    case Errc::SingularSystem:
    case Errc::ZeroReference:
    case Errc::DegenerateDistances:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse coding with ambiguation: owner, server and user workflow plus experiments"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "overrides the config seed");
    if (with_out) sub->add_option("--out", o.out, "output directory")->capture_default_str();
  };

  auto* gen = app.add_subcommand("gen", "generate synthetic data and authorized queries");
  common(gen, true);

  auto* owner = app.add_subcommand("owner-prepare", "learn W and R, encode, ambiguate, publish");
  common(owner, true);
  owner->add_option("--data", o.data, "data matrix file (default: generate from config)")
      ->check(CLI::ExistingFile);

  auto* server = app.add_subcommand("server-index", "load and validate a published codebook");
  server->add_option("--codebook", o.codebook, "sparse code file")->required();

  auto* user = app.add_subcommand("user-query", "encode, ambiguate and search; reconstruct the answer");
  common(user, true);
  user->add_option("--query", o.query, "query matrix file, one query per column")->required();
  user->add_option("--transform", o.transform, "transform matrix file")->required();
  user->add_option("--decoder", o.decoder, "decoder matrix file")->required();
  user->add_option("--codebook", o.codebook, "published sparse code file")->required();
  user->add_option("--mode", o.mode, "authorized or unauthorized")
      ->check(CLI::IsMember({"authorized", "unauthorized"}));
  user->add_option("--s-q", o.s_q, "query noise count (<= S_p)");
  user->add_option("--radius", o.radius, "absolute search radius");

  auto* exp = app.add_subcommand("experiment", "run a study and write NAME.csv");
  common(exp, true);
  exp->add_option("--study", o.study, "study name")->required()->check(CLI::IsMember(study_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  apply_thread_cap();
  try {
    if (*gen) cmd_gen(o, out);
    if (*owner) cmd_owner_prepare(o, out);
    if (*server) cmd_server_index(o, out);
    if (*user) cmd_user_query(o, out);
    if (*exp) cmd_experiment(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace sca::cli
