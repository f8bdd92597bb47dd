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
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sca {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

// Column m of a data matrix is the point x(m); rows are dimensions.
template <typename Scalar>
using DataMatrix = Matrix<Scalar>;

using Index = Eigen::Index;

// All randomized operations take an explicit engine owned by the caller.
using Rng = std::mt19937_64;

enum class Errc {
  InvalidArgument,
  DimensionMismatch,
  SingularTransform,
  InfeasibleCodebook,
  LineSearchFailed,
  ShapeUnsupported,
  SingularSystem,
  EmptyCodebook,
  AmbiguationBudgetExceeded,
  QueryNoiseExceedsDatabaseNoise,
  EmptyNeighborhood,
  EmptyGroundTruth,
  ZeroReference,
  DegenerateDistances,
  EmptyQuerySet,
  CorruptFile,
  Io,
  Config,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::SingularTransform: return "SingularTransform";
    case Errc::InfeasibleCodebook: return "InfeasibleCodebook";
    case Errc::LineSearchFailed: return "LineSearchFailed";
    case Errc::ShapeUnsupported: return "ShapeUnsupported";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::EmptyCodebook: return "EmptyCodebook";
    case Errc::AmbiguationBudgetExceeded: return "AmbiguationBudgetExceeded";
    case Errc::QueryNoiseExceedsDatabaseNoise: return "QueryNoiseExceedsDatabaseNoise";
    case Errc::EmptyNeighborhood: return "EmptyNeighborhood";
    case Errc::EmptyGroundTruth: return "EmptyGroundTruth";
    case Errc::ZeroReference: return "ZeroReference";
    case Errc::DegenerateDistances: return "DegenerateDistances";
    case Errc::EmptyQuerySet: return "EmptyQuerySet";
    case Errc::CorruptFile: return "CorruptFile";
    case Errc::Io: return "Io";
    case Errc::Config: return "Config";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

inline std::string shape_str(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace sca
