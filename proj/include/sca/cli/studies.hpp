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

// Experiment studies behind `sca experiment --study NAME`. Each returns typed
// rows; `write_*_csv` renders them with a header row.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sca/cli/config.hpp"

namespace sca::cli {

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Absolute radius from the config, else the radius_quantile (default 0.01)
/// of the given probe distances.
double resolve_radius(const ExperimentConfig& cfg, const std::vector<double>& distances);

struct DistancePair {
  double sigma_z;
  double d_s;
  double d_t;
};

/// Pairs (x, x + z) with sigma_z drawn uniformly between the smallest and
/// largest configured sigma_z. d_s is Euclidean; d_t is the latent metric
/// from the probe (S_q noise) to the stored code (S_p noise).
std::vector<DistancePair> distance_preservation(const ExperimentConfig& cfg);

struct IsometrySummary {
  double median_d_s;
  double near_spearman;
  double far_spearman;
};

/// Spearman correlation of (d_s, d_t) below and above the median d_s.
IsometrySummary isometry_summary(const std::vector<DistancePair>& pairs);

struct RobustnessRow {
  double sigma_z;
  SupportStats learned;
  SupportStats identity;
};

/// P_c / P_m of the learned W and of W = I over the sigma_z sweep. Every
/// level reuses the same noise draws scaled by sigma_z.
std::vector<RobustnessRow> support_robustness(const ExperimentConfig& cfg);

/// Full S_x by S_p grid.
std::vector<DistortionRow> distortion_sparsity(const ExperimentConfig& cfg);

struct LeakageRow {
  std::string domain;
  Index s_p;
  double kl;
};

/// KL(intra || inter) for the original data, clean codes, and ambiguated and
/// purified codes at every configured S_p plus the half and full levels.
std::vector<LeakageRow> clustering_leakage(const ExperimentConfig& cfg);

struct RecallRow {
  Index s_p;
  Index r;
  Index t;
  double recall;
};

/// Mean R-recall@T over authorized queries; ground truth is Euclidean in the
/// original domain. T = M is always included.
std::vector<RecallRow> recall(const ExperimentConfig& cfg);

struct FairnessRow {
  Id id;
  std::uint64_t count;
  double frequency;
};

/// Repeated fair sampling from the neighborhood of the first query.
std::vector<FairnessRow> fairness(const ExperimentConfig& cfg);

RecoverabilityResult recoverability(const ExperimentConfig& cfg);

void write_csv(std::ostream& out, const std::vector<DistancePair>& rows);
void write_csv(std::ostream& out, const std::vector<RobustnessRow>& rows);
void write_csv(std::ostream& out, const std::vector<DistortionRow>& rows);
void write_csv(std::ostream& out, const std::vector<LeakageRow>& rows);
void write_csv(std::ostream& out, const std::vector<RecallRow>& rows);
void write_csv(std::ostream& out, const std::vector<FairnessRow>& rows);
void write_csv(std::ostream& out, const RecoverabilityResult& r);

inline const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names{"distance-preservation", "support-robustness",
                                              "distortion-sparsity",   "clustering-leakage",
                                              "recall",                "fairness",
                                              "recoverability"};
  return names;
}

/// Runs a study by name and writes its CSV.
void run_study(const std::string& name, const ExperimentConfig& cfg, std::ostream& csv);

}  // namespace sca::cli
