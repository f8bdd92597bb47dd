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

// Experiment configuration. A JSON document; unknown keys are rejected.
//
//   {
//     "seed": 1,
//     "data": {"kind": "gaussian" | "ar1" | "clusters", "n_dims": 64,
//              "n_points": 2000, "sigma": 1.0, "rho": 0.5, "clusters": 4,
//              "center_spread": 2.0, "within_sigma": 1.0},
//     "code_len": 64,
//     "s_x": [1, 2, 4],            // or a single integer
//     "s_p": [0, 8],               // or a single integer
//     "s_q": 0,
//     "policy": "top_s" | "threshold", "lambda": 0.5,
//     "ternary": false, "rescale": false,
//     "metric": "support_overlap" | "masked_euclidean",
//     "radius": 2.0 | "radius_quantile": 0.05,
//     "epsilon": 0.05,
//     "beta": 0.5, "gamma": 0.5,
//     "learning": {"beta1": 2000, "beta11": 1, "beta12": 1, "beta13": 1,
//                  "max_iters": 200, "inner_steps": 1, "step_init": 1,
//                  "obj_tol": 1e-6},
//     "decoder": {"mode": "orthonormal" | "ridge", "beta_r": 1, "beta": 1e-8},
//     "sigma_z": [0, 0.1, 0.2],
//     "n_queries": 1000,
//     "recall_r": 10, "recall_t": [1, 10, 100],
//     "draws": 100000,
//     "mode": "authorized" | "unauthorized"
//   }
//
// All sigmas are standard deviations. Commands that need a single sparsity or
// noise level use the first entry of the corresponding list.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sca/datagen.hpp"
#include "sca/search.hpp"
#include "sca/threat.hpp"

namespace sca::cli {

enum class QueryMode { Authorized, Unauthorized };

struct ExperimentConfig {
  std::uint64_t seed = 0;
  SyntheticSpec data{IidGaussian{}, 16, 256, 0};
  Index code_len = 0;
  std::vector<Index> s_x{4};
  std::vector<Index> s_p{0};
  Index s_q = 0;
  std::optional<double> lambda;
  bool ternary = false;
  bool rescale = false;
  std::optional<LatentMetric> metric;
  std::optional<double> radius;
  std::optional<double> radius_quantile;
  double epsilon = 0.05;
  double beta = 0.5;
  double gamma = 0.5;
  LearningConfig learning;
  bool beta1_set = false;
  std::optional<DecoderMode> decoder_mode;
  double beta_r = 1.0;
  double decoder_beta = 1e-8;
  std::vector<double> sigma_z{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  Index n_queries = 100;
  Index recall_r = 10;
  std::vector<Index> recall_t{1, 10, 100};
  Index draws = 100000;
  QueryMode mode = QueryMode::Authorized;

  /// Metric from the config, else SupportOverlap for ternary codes and
  /// MaskedEuclidean otherwise.
  LatentMetric effective_metric() const;
  /// Pipeline settings; beta1 defaults to n_points.
  PipelineConfig pipeline() const;
};

/// Derived seed streams, so every stage draws from its own generator.
enum class Stream : std::uint64_t {
  Learning = 101,
  Ambiguation = 102,
  Queries = 103,
  Sampling = 104,
};

std::uint64_t stream_seed(const ExperimentConfig& cfg, Stream s);

/// Throws Error(Errc::Config) naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace sca::cli
