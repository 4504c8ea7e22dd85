// Copyright 2026 The entpow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "entpow_cli.hpp"
#include "test_support.hpp"

namespace entpow {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Invocation r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Value printed after a label such as "value" or "best_value".
double field(const std::string& text, const std::string& label) {
  std::istringstream s(text);
  std::string line;
  while (std::getline(s, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == label) {
      double v = 0.0;
      ls >> v;
      return v;
    }
  }
  ADD_FAILURE() << "label " << label << " not found in\n" << text;
  return 0.0;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("entpow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

struct CsvSummary {
  std::size_t rows = 0;
  std::size_t total = 0;
  double last_right = 0.0;
  double mean_estimate = 0.0;
};

CsvSummary read_csv(const std::string& text) {
  std::istringstream s(text);
  std::string line;
  std::getline(s, line);
  EXPECT_EQ(line, "bin_left,bin_right,count,density");
  CsvSummary c;
  double weighted = 0.0;
  while (std::getline(s, line)) {
    if (line.empty()) continue;
    double left = 0.0, right = 0.0, density = 0.0;
    std::size_t count = 0;
    char comma = 0;
    std::istringstream ls(line);
    ls >> left >> comma >> right >> comma >> count >> comma >> density;
    EXPECT_TRUE(ls) << line;
    ++c.rows;
    c.total += count;
    c.last_right = right;
    weighted += 0.5 * (left + right) * static_cast<double>(count);
  }
  c.mean_estimate = weighted / static_cast<double>(c.total);
  return c;
}

TEST_F(CliTest, EvalKnownGates) {
  auto r = invoke({"eval", "--gate", "cnot"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "value"), 2.0 / 9.0, 1e-10);
  r = invoke({"eval", "--gate", "identity", "--d1", "2", "--d2", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "value"), 0.0, 1e-12);
  r = invoke({"eval", "--gate", "swap", "--d", "3", "--method", "both"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "value"), ep_closed(make_swap(3)).value, 1e-12);
  r = invoke({"eval", "--gate", "additive-perm", "--d", "5", "--method", "oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "value"), 2.0 / 3.0, 1e-10);
  r = invoke({"eval", "--gate", "perm", "--table", "0,1,3,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "value"), 2.0 / 9.0, 1e-10);
}

TEST_F(CliTest, EvalWritesReportAndManifest) {
  const std::string out = path("eval.json");
  const auto r = invoke({"eval", "--gate", "controlled", "--d", "3", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(out));
  EXPECT_NEAR(doc.at("reports").at(0).at("value").get<double>(), ep_closed(make_controlled_family(3)).value, 1e-12);
  const auto m = cli::read_manifest(out + ".manifest.json");
  EXPECT_EQ(m.command, "eval");
  EXPECT_EQ(m.d1, 3u);
  EXPECT_EQ(m.d2, 3u);
  EXPECT_EQ(m.tool_version, cli::kToolVersion);
  EXPECT_GE(m.wall_time, 0.0);
  EXPECT_EQ(m.parameters.at("gate"), "controlled");
}

TEST_F(CliTest, BadArgumentsExitWithValidationCode) {
  EXPECT_EQ(invoke({"eval", "--gate", "nonsense"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--d1", "0"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--d", "2", "--d1", "2"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--method", "guess"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--gate", "perm", "--table", "0,1,1,2"}).code, 2);
  EXPECT_EQ(invoke({"eval", "--gate", "additive-perm", "--d", "4"}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
}

TEST_F(CliTest, MissingFileExitsWithIoCode) {
  const auto r = invoke({"eval", "--file", path("absent.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, NonUnitaryFileIsRejectedWithItsDefect) {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  m(0, 0) = 2.0;
  nlohmann::json doc{{"d1", 2}, {"d2", 2}, {"matrix", matrix_to_json(m)}};
  std::ofstream(path("bad.json")) << doc.dump();
  const auto r = invoke({"eval", "--file", path("bad.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("||U^dagger U - I||_F = 3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("exceeds tolerance"), std::string::npos) << r.err;
}

TEST_F(CliTest, MonteCarloAgreesWithClosedForm) {
  const auto r = invoke({"mc", "--gate", "cnot", "--samples", "20000", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream s(r.out.substr(r.out.find("estimate")));
  std::string label, pm;
  double value = 0.0, se = 0.0;
  s >> label >> value >> pm >> se;
  EXPECT_GT(se, 0.0);
  EXPECT_LT(std::abs(value - 2.0 / 9.0), 4.0 * se);
  EXPECT_NEAR(field(r.out, "closed_form"), 2.0 / 9.0, 1e-12);
}

TEST_F(CliTest, DistWritesCsvAndManifest) {
  const std::string out = path("q.csv");
  const auto r = invoke({"dist", "--d", "2", "--samples", "3000", "--bins", "25", "--seed", "5", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvSummary c = read_csv(slurp(out));
  EXPECT_EQ(c.rows, 25u);
  EXPECT_EQ(c.total, 3000u);
  EXPECT_NEAR(c.last_right, 1.0 / 3.0, 1e-15);
  const auto m = cli::read_manifest(out + ".manifest.json");
  EXPECT_EQ(m.command, "dist");
  EXPECT_EQ(m.seed.master_seed, 5u);
  EXPECT_EQ(m.parameters.at("samples"), "3000");
  EXPECT_EQ(m.parameters.at("bins"), "25");
}

TEST_F(CliTest, DistWithoutOutPrintsCsv) {
  const auto r = invoke({"dist", "--d", "2", "--samples", "500", "--bins", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvSummary c = read_csv(r.out);
  EXPECT_EQ(c.rows, 10u);
  EXPECT_EQ(c.total, 500u);
}

TEST_F(CliTest, DistUnwritablePathExitsWithIoCode) {
  const auto r = invoke({"dist", "--samples", "100", "--bins", "10", "--out", path("no/such/dir/q.csv")});
  EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, DistTwoQutritMean) {
  const std::string out = path("q33.csv");
  const auto r = invoke({"dist", "--d", "3", "--samples", "20000", "--bins", "100", "--seed", "11", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const double mean = field(r.out, "empirical_mean");
  const std::string sig = r.out.substr(r.out.find("sigma of mean") + 13);
  const double sigma = std::stod(sig);
  EXPECT_NEAR(mean, 0.4, 3.0 * sigma);
  EXPECT_NEAR(field(r.out, "haar_mean"), 0.4, 1e-15);
}

TEST_F(CliTest, DistFourQuditsStaysBelowBound) {
  const auto r = invoke({"dist", "--d", "4", "--samples", "2000", "--bins", "50", "--seed", "12", "--out", path("q44.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(field(r.out, "empirical_max"), 0.6 + 1e-9);
  EXPECT_NEAR(field(r.out, "upper_bound"), 0.6, 1e-15);
}

TEST_F(CliTest, OptimizeWritesLoadableGate) {
  const std::string out = path("best.json");
  const auto r = invoke({"optimize", "--d", "2", "--restarts", "4", "--iters", "3000", "--seed", "3", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const double best = field(r.out, "best_value");
  EXPECT_NEAR(best, 2.0 / 9.0, 1e-3);
  const UnitaryGate g = load_gate(out);
  EXPECT_NEAR(ep_closed(g).value, best, 1e-10);
  const auto e = invoke({"eval", "--file", out});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NEAR(field(e.out, "value"), best, 1e-10);
}

TEST_F(CliTest, ReplayReproducesOutputsBitForBit) {
  const std::string dist_out = path("q.csv");
  ASSERT_EQ(invoke({"dist", "--d1", "2", "--d2", "3", "--samples", "2000", "--bins", "30", "--seed", "9", "--stream", "2",
                    "--threads", "3", "--out", dist_out})
                .code,
            0);
  const std::string replayed = path("q_replayed.csv");
  ASSERT_EQ(invoke({"replay", dist_out + ".manifest.json", "--out", replayed}).code, 0);
  EXPECT_EQ(slurp(dist_out), slurp(replayed));

  const std::string opt_out = path("g.json");
  ASSERT_EQ(invoke({"optimize", "--d", "2", "--restarts", "2", "--iters", "500", "--seed", "4", "--out", opt_out}).code, 0);
  const std::string first = slurp(opt_out);
  ASSERT_EQ(invoke({"replay", opt_out + ".manifest.json"}).code, 0);
  EXPECT_EQ(slurp(opt_out), first);

  const std::string mc_out = path("mc.json");
  ASSERT_EQ(invoke({"mc", "--gate", "haar", "--d", "3", "--samples", "3000", "--seed", "8", "--out", mc_out}).code, 0);
  const std::string mc_replayed = path("mc2.json");
  ASSERT_EQ(invoke({"replay", mc_out + ".manifest.json", "--out", mc_replayed}).code, 0);
  EXPECT_EQ(slurp(mc_out), slurp(mc_replayed));
}

TEST_F(CliTest, ReplayOfMissingOrCorruptManifest) {
  EXPECT_EQ(invoke({"replay", path("none.manifest.json")}).code, 3);
  std::ofstream(path("bad.manifest.json")) << "{\"command\": 1";
  EXPECT_EQ(invoke({"replay", path("bad.manifest.json")}).code, 2);
  std::ofstream(path("incomplete.manifest.json")) << "{\"command\": \"dist\"}";
  EXPECT_EQ(invoke({"replay", path("incomplete.manifest.json")}).code, 2);
}

TEST_F(CliTest, PermutationsReportsMaximumAndCap) {
  auto r = invoke({"permutations", "--d1", "2", "--d2", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "max_value"), 1.0 / 3.0, 1e-12);
  r = invoke({"permutations", "--d", "3"});
  EXPECT_EQ(r.code, 4);
}

TEST_F(CliTest, VerifyPassesAndRejectsCorruptFile) {
  auto r = invoke({"verify"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("[FAIL]"), std::string::npos);
  std::ofstream(path("corrupt.json")) << "{\"d1\": 2, \"d2\": 2, \"matrix\": [[1, 2]";
  r = invoke({"verify", "--file", path("corrupt.json")});
  EXPECT_EQ(r.code, 2);
  const UnitaryGate cnot = make_cnot();
  save_gate(path("cnot.json"), cnot);
  r = invoke({"verify", "--file", path("cnot.json")});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST_F(CliTest, ThreadCountComesFromEnvironment) {
  ::setenv("ENTPOW_THREADS", "3", 1);
  EXPECT_EQ(default_thread_count(), 3u);
  const auto a = invoke({"dist", "--d", "2", "--samples", "1500", "--bins", "20", "--seed", "6"});
  ::setenv("ENTPOW_THREADS", "1", 1);
  EXPECT_EQ(default_thread_count(), 1u);
  const auto b = invoke({"dist", "--d", "2", "--samples", "1500", "--bins", "20", "--seed", "6"});
  ::unsetenv("ENTPOW_THREADS");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

}  // namespace
}  // namespace entpow
