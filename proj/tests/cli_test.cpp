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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "sca/cli/commands.hpp"
#include "sca/cli/config.hpp"
#include "sca/io.hpp"

namespace sca::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sca");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sca_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const char* kMinimal = R"({"seed": 3, "data": {"kind": "gaussian", "n_dims": 8, "n_points": 32},
  "code_len": 8, "s_x": 2, "s_p": 3, "n_queries": 6, "sigma_z": [0.05]})";

TEST_F(CliTest, OwnerPrepareWritesThreeFiles) {
  const auto cfg = write("cfg.json", kMinimal);
  const auto r = run_cli({"owner-prepare", "--config", cfg, "--out", path("a")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "L=8 S_x=2 S_p=3 N=8 M=32\n");
  for (const char* f : {"transform.scam", "decoder.scam"})
    EXPECT_EQ(io::read_matrix_file(dir_ / "a" / f).size(), 64);
  const auto book = io::read_code_file(dir_ / "a" / "codebook.scac");
  EXPECT_EQ(book.codes.size(), 32u);
  for (const auto& c : book.codes) EXPECT_EQ(c.nnz(), 5);
}

TEST_F(CliTest, OwnerPrepareIsByteIdentical) {
  const auto cfg = write("cfg.json", kMinimal);
  ASSERT_EQ(run_cli({"owner-prepare", "--config", cfg, "--out", path("a")}).code, 0);
  ASSERT_EQ(run_cli({"owner-prepare", "--config", cfg, "--out", path("b")}).code, 0);
  for (const char* f : {"transform.scam", "decoder.scam", "codebook.scac"})
    EXPECT_EQ(io::read_bytes(dir_ / "a" / f), io::read_bytes(dir_ / "b" / f)) << f;
}

TEST_F(CliTest, OverBudgetIsConfigError) {
  const auto cfg = write("cfg.json", R"({"data": {"n_dims": 8, "n_points": 10}, "s_x": 2, "s_p": 7})");
  const auto r = run_cli({"owner-prepare", "--config", cfg, "--out", path("a")});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("s_p"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownKeyIsConfigError) {
  const auto cfg = write("cfg.json", R"({"learning": {"beta1": 1, "speed": 2}})");
  const auto r = run_cli({"gen", "--config", cfg, "--out", path("a")});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("learning.speed"), std::string::npos) << r.err;
}

TEST_F(CliTest, ServerIndexSummary) {
  const auto cfg = write("cfg.json", kMinimal);
  ASSERT_EQ(run_cli({"owner-prepare", "--config", cfg, "--out", path("a")}).code, 0);
  const auto r = run_cli({"server-index", "--codebook", path("a/codebook.scac")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "M=32 L=8 mean_nnz=5\n");
}

TEST_F(CliTest, ServerIndexTruncated) {
  const auto cfg = write("cfg.json", kMinimal);
  ASSERT_EQ(run_cli({"owner-prepare", "--config", cfg, "--out", path("a")}).code, 0);
  auto bytes = io::read_bytes(dir_ / "a" / "codebook.scac");
  bytes.resize(bytes.size() - 7);
  io::write_bytes(dir_ / "t.scac", bytes);
  const auto r = run_cli({"server-index", "--codebook", path("t.scac")});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("expected at least"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("byte offset"), std::string::npos) << r.err;
}

TEST_F(CliTest, ServerIndexEmptyCodebook) {
  io::write_code_file(dir_ / "e.scac", io::CodeFile{8, {}});
  const auto r = run_cli({"server-index", "--codebook", path("e.scac")});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("EmptyCodebook"), std::string::npos) << r.err;
}

TEST_F(CliTest, UserQueryFindsStoredPoint) {
  const auto cfg = write("cfg.json", R"({"seed": 4, "data": {"n_dims": 8, "n_points": 32},
    "s_x": 3, "s_p": 0, "s_q": 0})");
  ASSERT_EQ(run_cli({"gen", "--config", cfg, "--out", path("g")}).code, 0);
  const MatrixXd x = io::read_matrix_file(dir_ / "g" / "data.scam");
  ASSERT_EQ(run_cli({"owner-prepare", "--config", cfg, "--out", path("o"), "--data", path("g/data.scam")}).code, 0);
  io::write_matrix_file(dir_ / "q.scam", MatrixXd(x.col(5)));
  const auto r = run_cli({"user-query", "--config", cfg, "--out", path("u"), "--query", path("q.scam"),
                          "--transform", path("o/transform.scam"), "--decoder", path("o/decoder.scam"),
                          "--codebook", path("o/codebook.scac"), "--radius", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("query 0: id=5 neighborhood=1", 0), 0u) << r.out;
  const auto probes = io::read_code_file(dir_ / "u" / "probe.scac");
  ASSERT_EQ(probes.codes.size(), 1u);
  EXPECT_EQ(probes.codes[0].nnz(), 3);
}

TEST_F(CliTest, UserQueryEmptyNeighborhoodIsNotAnError) {
  const auto cfg = write("cfg.json", kMinimal);
  ASSERT_EQ(run_cli({"gen", "--config", cfg, "--out", path("g")}).code, 0);
  ASSERT_EQ(run_cli({"owner-prepare", "--config", cfg, "--out", path("o"), "--data", path("g/data.scam")}).code, 0);
  io::write_matrix_file(dir_ / "q.scam", MatrixXd(MatrixXd::Constant(8, 1, 50.0)));
  const auto r = run_cli({"user-query", "--config", cfg, "--out", path("u"), "--query", path("q.scam"),
                          "--transform", path("o/transform.scam"), "--decoder", path("o/decoder.scam"),
                          "--codebook", path("o/codebook.scac"), "--radius", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("no such point"), std::string::npos) << r.out;
}

double total_distortion(const std::string& out) {
  double sum = 0.0;
  std::size_t pos = 0;
  while ((pos = out.find("distortion=", pos)) != std::string::npos) {
    pos += 11;
    sum += std::stod(out.substr(pos));
  }
  return sum;
}

TEST_F(CliTest, UnauthorizedDistortionIsHigher) {
  const auto cfg = write("cfg.json", R"({"seed": 5, "data": {"n_dims": 16, "n_points": 200},
    "s_x": 4, "s_p": 8, "n_queries": 50, "sigma_z": [0.05], "radius_quantile": 0.0})");
  ASSERT_EQ(run_cli({"gen", "--config", cfg, "--out", path("g")}).code, 0);
  ASSERT_EQ(run_cli({"owner-prepare", "--config", cfg, "--out", path("o"), "--data", path("g/data.scam")}).code, 0);
  std::vector<std::string> base{"user-query", "--config", cfg, "--out", path("u"), "--query", path("g/queries.scam"),
                                "--transform", path("o/transform.scam"), "--decoder", path("o/decoder.scam"),
                                "--codebook", path("o/codebook.scac")};
  const auto auth = run_cli(base);
  base.insert(base.end(), {"--mode", "unauthorized"});
  const auto unauth = run_cli(base);
  ASSERT_EQ(auth.code, 0) << auth.err;
  ASSERT_EQ(unauth.code, 0) << unauth.err;
  EXPECT_GE(total_distortion(unauth.out), total_distortion(auth.out));
}

std::vector<std::string> csv_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

TEST_F(CliTest, DistortionStudyShape) {
  const auto cfg = write("cfg.json", R"({"data": {"n_dims": 8, "n_points": 60}, "s_x": [1, 2, 4],
    "s_p": [0, 2], "learning": {"max_iters": 10}})");
  const auto r = run_cli({"experiment", "--config", cfg, "--out", path("e"), "--study", "distortion-sparsity"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = csv_lines(dir_ / "e" / "distortion-sparsity.csv");
  ASSERT_EQ(lines.size(), 1u + 3 * 2);
  EXPECT_EQ(lines[0], "s_x,s_p,authorized_mse,unauthorized_mse");
}

TEST_F(CliTest, FairnessStudyBand) {
  const auto cfg = write("cfg.json", R"({"data": {"n_dims": 8, "n_points": 400}, "s_x": 2,
    "radius_quantile": 0.05, "learning": {"max_iters": 10}, "draws": 100000})");
  const auto r = run_cli({"experiment", "--config", cfg, "--out", path("e"), "--study", "fairness"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = csv_lines(dir_ / "e" / "fairness.csv");
  ASSERT_GE(lines.size(), 3u);
  double lo = 1e300, hi = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double f = std::stod(lines[i].substr(lines[i].rfind(',') + 1));
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  EXPECT_LE(hi / lo, 1.05 * 1.05);
}

TEST_F(CliTest, RecallStudyIncludesFullT) {
  const auto cfg = write("cfg.json", R"({"data": {"n_dims": 8, "n_points": 100}, "s_x": 2, "s_p": [0, 3],
    "recall_r": 5, "recall_t": [1, 10], "n_queries": 20, "learning": {"max_iters": 10}})");
  const auto r = run_cli({"experiment", "--config", cfg, "--out", path("e"), "--study", "recall"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = csv_lines(dir_ / "e" / "recall.csv");
  EXPECT_NE(std::find(lines.begin(), lines.end(), "0,5,100,1"), lines.end());
  EXPECT_NE(std::find(lines.begin(), lines.end(), "3,5,100,1"), lines.end());
}

TEST_F(CliTest, UnknownStudy) {
  EXPECT_EQ(run_cli({"experiment", "--out", path("e"), "--study", "nope"}).code, kExitConfig);
}

TEST(Config, Defaults) {
  const auto cfg = parse_config("{}");
  EXPECT_EQ(cfg.code_len, cfg.data.n_dims);
  EXPECT_EQ(cfg.effective_metric(), LatentMetric::MaskedEuclidean);
  EXPECT_EQ(cfg.pipeline().learning.beta1, double(cfg.data.n_points));
}

TEST(Config, Rejections) {
  auto code_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  EXPECT_EQ(code_of(R"({"s_x": []})"), Errc::Config);
  EXPECT_EQ(code_of(R"({"policy": "threshold"})"), Errc::Config);
  EXPECT_EQ(code_of(R"({"decoder": {"mode": "svd"}})"), Errc::Config);
  EXPECT_EQ(code_of(R"({"data": {"kind": "ar1", "rho": 1.0}})"), Errc::Config);
  EXPECT_EQ(code_of(R"({"radius": 1, "radius_quantile": 0.1})"), Errc::Config);
  EXPECT_EQ(code_of(R"({"s_p": 2, "s_q": 3})"), Errc::Config);
  EXPECT_EQ(code_of("{not json"), Errc::Config);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code(Errc::Config), kExitConfig);
  EXPECT_EQ(exit_code(Errc::CorruptFile), kExitIo);
  EXPECT_EQ(exit_code(Errc::SingularTransform), kExitNumerical);
}

}  // namespace
}  // namespace sca::cli
