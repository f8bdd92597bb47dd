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

#include "sca/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sca::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
  throw Error(Errc::Config, field + ": " + msg);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad(where.empty() ? "config" : where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) bad(where.empty() ? key : where + "." + key, "unknown key");
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) bad(field, "expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) bad(field, "expected an integer");
  return v.get<std::int64_t>();
}

bool boolean(const json& v, const std::string& field) {
  if (!v.is_boolean()) bad(field, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) bad(field, "expected a string");
  return v.get<std::string>();
}

template <typename T, typename F>
std::vector<T> list(const json& v, const std::string& field, F one) {
  std::vector<T> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(one(v[i], field + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(one(v, field));
  }
  if (out.empty()) bad(field, "sweep must be nonempty");
  return out;
}

std::vector<Index> index_list(const json& v, const std::string& field) {
  return list<Index>(v, field, [](const json& e, const std::string& f) { return Index(integer(e, f)); });
}

std::vector<double> number_list(const json& v, const std::string& field) {
  return list<double>(v, field, [](const json& e, const std::string& f) { return number(e, f); });
}

void parse_data(const json& d, ExperimentConfig& cfg) {
  check_keys(d, "data",
             {"kind", "n_dims", "n_points", "sigma", "rho", "clusters", "center_spread", "within_sigma"});
  const std::string kind = d.contains("kind") ? text(d["kind"], "data.kind") : "gaussian";
  const double sigma = d.contains("sigma") ? number(d["sigma"], "data.sigma") : 1.0;
  if (kind == "gaussian") {
    cfg.data.kind = IidGaussian{sigma};
  } else if (kind == "ar1") {
    cfg.data.kind = Ar1{d.contains("rho") ? number(d["rho"], "data.rho") : 0.5, sigma};
  } else if (kind == "clusters") {
    GaussianClusters c;
    if (d.contains("clusters")) c.k = integer(d["clusters"], "data.clusters");
    if (d.contains("center_spread")) c.center_spread = number(d["center_spread"], "data.center_spread");
    if (d.contains("within_sigma")) c.within_sigma = number(d["within_sigma"], "data.within_sigma");
    cfg.data.kind = c;
  } else {
    bad("data.kind", "expected gaussian, ar1 or clusters, got \"" + kind + "\"");
  }
  if (d.contains("n_dims")) cfg.data.n_dims = integer(d["n_dims"], "data.n_dims");
  if (d.contains("n_points")) cfg.data.n_points = integer(d["n_points"], "data.n_points");
}

void parse_learning(const json& l, LearningConfig& cfg, bool& beta1_set) {
  check_keys(l, "learning",
             {"beta1", "beta11", "beta12", "beta13", "max_iters", "inner_steps", "step_init", "obj_tol"});
  if (l.contains("beta1")) {
    cfg.beta1 = number(l["beta1"], "learning.beta1");
    beta1_set = true;
  }
  if (l.contains("beta11")) cfg.beta11 = number(l["beta11"], "learning.beta11");
  if (l.contains("beta12")) cfg.beta12 = number(l["beta12"], "learning.beta12");
  if (l.contains("beta13")) cfg.beta13 = number(l["beta13"], "learning.beta13");
  if (l.contains("max_iters")) cfg.max_iters = int(integer(l["max_iters"], "learning.max_iters"));
  if (l.contains("inner_steps")) cfg.inner_steps = int(integer(l["inner_steps"], "learning.inner_steps"));
  if (l.contains("step_init")) cfg.step_init = number(l["step_init"], "learning.step_init");
  if (l.contains("obj_tol")) cfg.obj_tol = number(l["obj_tol"], "learning.obj_tol");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.data.n_dims < 1) bad("data.n_dims", "must be >= 1");
  if (cfg.data.n_points < 1) bad("data.n_points", "must be >= 1");
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, IidGaussian>) {
          if (!(k.sigma > 0)) bad("data.sigma", "must be > 0");
        } else if constexpr (std::is_same_v<K, Ar1>) {
          if (!(k.sigma > 0)) bad("data.sigma", "must be > 0");
          if (!(std::abs(k.rho) < 1)) bad("data.rho", "must satisfy |rho| < 1");
        } else {
          if (k.k < 2) bad("data.clusters", "must be >= 2");
          if (!(k.center_spread >= 0)) bad("data.center_spread", "must be >= 0");
          if (!(k.within_sigma >= 0)) bad("data.within_sigma", "must be >= 0");
        }
      },
      cfg.data.kind);
  if (cfg.code_len < cfg.data.n_dims) {
    bad("code_len", "L=" + std::to_string(cfg.code_len) + " must be >= n_dims=" + std::to_string(cfg.data.n_dims));
  }
  for (Index s : cfg.s_x) {
    if (s < 1 || s > cfg.code_len) bad("s_x", "value " + std::to_string(s) + " outside [1, L]");
  }
  for (Index p : cfg.s_p) {
    if (p < 0) bad("s_p", "value " + std::to_string(p) + " is negative");
    for (Index s : cfg.s_x) {
      if (p > cfg.code_len - s) {
        bad("s_p", "value " + std::to_string(p) + " exceeds L - S_x = " + std::to_string(cfg.code_len - s));
      }
    }
  }
  if (cfg.s_q < 0 || cfg.s_q > cfg.s_p.front()) bad("s_q", "must lie in [0, S_p]");
  if (cfg.lambda && !(*cfg.lambda > 0)) bad("lambda", "must be > 0");
  if (cfg.radius && !(*cfg.radius >= 0)) bad("radius", "must be >= 0");
  if (cfg.radius_quantile && !(*cfg.radius_quantile >= 0 && *cfg.radius_quantile <= 1)) {
    bad("radius_quantile", "must lie in [0, 1]");
  }
  if (cfg.radius && cfg.radius_quantile) bad("radius", "give radius or radius_quantile, not both");
  if (!(cfg.epsilon >= 0)) bad("epsilon", "must be >= 0");
  if (!(cfg.beta >= 0)) bad("beta", "must be >= 0");
  if (!(cfg.gamma >= 0 && cfg.gamma <= 1)) bad("gamma", "must lie in [0, 1]");
  for (double s : cfg.sigma_z) {
    if (!(s >= 0)) bad("sigma_z", "values must be >= 0");
  }
  if (cfg.n_queries < 1 || cfg.n_queries > cfg.data.n_points) bad("n_queries", "must lie in [1, n_points]");
  if (cfg.recall_r < 1 || cfg.recall_r > cfg.data.n_points) bad("recall_r", "must lie in [1, n_points]");
  for (Index t : cfg.recall_t) {
    if (t < 1 || t > cfg.data.n_points) bad("recall_t", "value " + std::to_string(t) + " outside [1, n_points]");
  }
  if (cfg.draws < 1) bad("draws", "must be >= 1");
  if (!(cfg.beta_r >= 0)) bad("decoder.beta_r", "must be >= 0");
  if (!(cfg.decoder_beta >= 0)) bad("decoder.beta", "must be >= 0");
  try {
    cfg.learning.validate();
  } catch (const Error& e) {
    bad("learning", e.what());
  }
}

}  // namespace

LatentMetric ExperimentConfig::effective_metric() const {
  if (metric) return *metric;
  return ternary ? LatentMetric::SupportOverlap : LatentMetric::MaskedEuclidean;
}

PipelineConfig ExperimentConfig::pipeline() const {
  PipelineConfig p;
  p.code_len = code_len;
  p.learning = learning;
  if (!beta1_set) p.learning.beta1 = double(data.n_points);
  p.learning.rng_seed = stream_seed(*this, Stream::Learning);
  p.decoder_mode = decoder_mode;
  p.beta_r = beta_r;
  p.beta = decoder_beta;
  p.ternary = ternary;
  p.rescale = rescale;
  if (lambda) p.encoding = Threshold{*lambda};
  return p;
}

std::uint64_t stream_seed(const ExperimentConfig& cfg, Stream s) {
  return mix_seed(cfg.seed, static_cast<std::uint64_t>(s));
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Config, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "",
             {"seed", "data", "code_len", "s_x", "s_p", "s_q", "policy", "lambda", "ternary", "rescale",
              "metric", "radius", "radius_quantile", "epsilon", "beta", "gamma", "learning", "decoder",
              "sigma_z", "n_queries", "recall_r", "recall_t", "draws", "mode"});
  ExperimentConfig cfg;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("seed", "expected a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("data")) parse_data(j["data"], cfg);
  cfg.data.seed = cfg.seed;
  cfg.code_len = j.contains("code_len") ? Index(integer(j["code_len"], "code_len")) : cfg.data.n_dims;
  if (j.contains("s_x")) cfg.s_x = index_list(j["s_x"], "s_x");
  if (j.contains("s_p")) cfg.s_p = index_list(j["s_p"], "s_p");
  if (j.contains("s_q")) cfg.s_q = integer(j["s_q"], "s_q");
  const std::string policy = j.contains("policy") ? text(j["policy"], "policy") : "top_s";
  if (policy == "threshold") {
    if (!j.contains("lambda")) bad("lambda", "required by the threshold policy");
    cfg.lambda = number(j["lambda"], "lambda");
  } else if (policy != "top_s") {
    bad("policy", "expected top_s or threshold");
  } else if (j.contains("lambda")) {
    bad("lambda", "only valid with the threshold policy");
  }
  if (j.contains("ternary")) cfg.ternary = boolean(j["ternary"], "ternary");
  if (j.contains("rescale")) cfg.rescale = boolean(j["rescale"], "rescale");
  if (j.contains("metric")) {
    const auto m = text(j["metric"], "metric");
    if (m == "support_overlap") {
      cfg.metric = LatentMetric::SupportOverlap;
    } else if (m == "masked_euclidean") {
      cfg.metric = LatentMetric::MaskedEuclidean;
    } else {
      bad("metric", "expected support_overlap or masked_euclidean");
    }
  }
  if (j.contains("radius")) cfg.radius = number(j["radius"], "radius");
  if (j.contains("radius_quantile")) cfg.radius_quantile = number(j["radius_quantile"], "radius_quantile");
  if (j.contains("epsilon")) cfg.epsilon = number(j["epsilon"], "epsilon");
  if (j.contains("beta")) cfg.beta = number(j["beta"], "beta");
  if (j.contains("gamma")) cfg.gamma = number(j["gamma"], "gamma");
  if (j.contains("learning")) parse_learning(j["learning"], cfg.learning, cfg.beta1_set);
  if (j.contains("decoder")) {
    const auto& d = j["decoder"];
    check_keys(d, "decoder", {"mode", "beta_r", "beta"});
    if (d.contains("mode")) {
      const auto m = text(d["mode"], "decoder.mode");
      if (m == "orthonormal") {
        cfg.decoder_mode = DecoderMode::Orthonormal;
      } else if (m == "ridge") {
        cfg.decoder_mode = DecoderMode::Ridge;
      } else {
        bad("decoder.mode", "expected orthonormal or ridge");
      }
    }
    if (d.contains("beta_r")) cfg.beta_r = number(d["beta_r"], "decoder.beta_r");
    if (d.contains("beta")) cfg.decoder_beta = number(d["beta"], "decoder.beta");
  }
  if (j.contains("sigma_z")) cfg.sigma_z = number_list(j["sigma_z"], "sigma_z");
  if (j.contains("n_queries")) cfg.n_queries = integer(j["n_queries"], "n_queries");
  if (j.contains("recall_r")) cfg.recall_r = integer(j["recall_r"], "recall_r");
  if (j.contains("recall_t")) cfg.recall_t = index_list(j["recall_t"], "recall_t");
  if (j.contains("draws")) cfg.draws = integer(j["draws"], "draws");
  if (j.contains("mode")) {
    const auto m = text(j["mode"], "mode");
    if (m == "authorized") {
      cfg.mode = QueryMode::Authorized;
    } else if (m == "unauthorized") {
      cfg.mode = QueryMode::Unauthorized;
    } else {
      bad("mode", "expected authorized or unauthorized");
    }
  }
  if (!j.contains("n_queries")) cfg.n_queries = std::min(cfg.n_queries, cfg.data.n_points);
  if (!j.contains("recall_r")) cfg.recall_r = std::min(cfg.recall_r, cfg.data.n_points);
  if (!j.contains("recall_t")) {
    std::vector<Index> t;
    for (Index v : cfg.recall_t)
      if (v <= cfg.data.n_points) t.push_back(v);
    cfg.recall_t = t.empty() ? std::vector<Index>{cfg.data.n_points} : t;
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace sca::cli
