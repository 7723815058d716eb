// Copyright 2026 The qlinsolve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/problem.hpp"
#include "qlinsolve/errors.hpp"
#include "support/property.hpp"
#include "support/systems.hpp"

namespace qlinsolve::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kData = QLINSOLVE_DATA_DIR;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qlinsolve");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("qlinsolve_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_problem(const std::string& name, const std::string& text) {
  const fs::path p = fs::path(::testing::TempDir()) / ("qlinsolve_cli_" + name + ".json");
  std::ofstream(p) << text;
  return p;
}

TEST(ParseProblem, FullSchema) {
  const auto p = parse_problem(R"({
    "matrix": [[-1.8, 0.6], [-0.4, 1.4]], "b": [-0.6, 0.8], "target_k": 2,
    "protocol": "embed-full", "shots": {"series": 2, "per_series": 500},
    "noise": {"intercept": 0.1, "slope": -0.2, "jitter_sd": 0.01},
    "correction": {"intercept": 0.1, "slope": -0.2}, "seed": 9, "site": 2})");
  EXPECT_EQ(p.a.rows(), 2);
  EXPECT_DOUBLE_EQ((*p.b)(1), 0.8);
  EXPECT_EQ(*p.target_k, 2);
  EXPECT_EQ(p.protocol, Protocol::kEmbedFull);
  EXPECT_EQ(p.shots->series, 2);
  EXPECT_EQ(p.shots->shots, 500);
  EXPECT_DOUBLE_EQ(p.noise->jitter_sd, 0.01);
  EXPECT_DOUBLE_EQ(p.correction->slope, -0.2);
  EXPECT_EQ(p.seed, 9u);
  EXPECT_EQ(*p.site, 2);
}

TEST(ParseProblem, SyntaxErrorHasLineAndColumn) {
  try {
    parse_problem("{\n  \"matrix\": [[1, 2],\n   [3, 4]],,\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 0u);
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
  }
}

TEST(ParseProblem, SchemaErrors) {
  const char* bad[] = {
      R"({"b": [1]})",
      R"({"matrix": [[1, 2], [3]]})",
      R"({"matrix": [[1, 0], [0, 1]], "b": [1, 2, 3]})",
      R"({"matrix": [[1, 0], [0, 1]], "protocol": "hhl"})",
      R"({"matrix": [[1, 0], [0, 1]], "target_k": 3})",
      R"({"matrix": [[1, 0], [0, 1]], "colour": 1})",
      R"({"matrix": [[1, "x"], [0, 1]]})",
      R"({"matrix": [[1, 0], [0, 1]], "noise": {"jitter_sd": -1}})",
      R"({"matrix": [[1, 0], [0, 1]], "chain": {"couplings": [1, 1], "larmor": [0, 0], "time": 1}})",
      R"([1, 2])",
  };
  for (const char* text : bad) {
    try {
      parse_problem(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 0u) << text;
    }
  }
}

TEST(CmdSolve, TwoEquationCircuit) {
  ProblemFile p = load_problem(kData / "two_equations.json");
  p.target_k = 1;
  const RunReport r = cmd_solve(p);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_NEAR(*r.rows[0].x_quantum, 0.5789, 5e-5);
  EXPECT_TRUE(r.rows[0].match);
  EXPECT_EQ(r.scale, 1.0);
  EXPECT_FALSE(r.rows[0].x_sq_sampled.has_value());
}

TEST(CmdSolve, SuppliedChainSpec) {
  const RunReport r = cmd_solve(load_problem(kData / "chain_x2.json"));
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].k, 2);
  EXPECT_NEAR(*r.rows[0].x_quantum, 0.6578, 1e-3);
  EXPECT_TRUE(r.rows[0].match);
}

TEST(CmdSolve, EveryProtocolMatchesClassical) {
  for (Protocol proto : {Protocol::kEmbedReduced, Protocol::kCircuit}) {
    ProblemFile p = load_problem(kData / "three_equations.json");
    p.protocol = proto;
    const RunReport r = cmd_solve(p);
    EXPECT_TRUE(r.all_match()) << to_string(proto);
    for (const auto& row : r.rows) EXPECT_LE(std::abs(*row.x_quantum - row.x_classical), 1e-8);
  }
  ProblemFile p = load_problem(kData / "three_equations.json");
  p.protocol = Protocol::kEmbedFull;
  EXPECT_THROW(cmd_solve(p), InfeasibleEmbedding);
  const RunReport r = cmd_solve(p, true);
  EXPECT_GT(r.scale, 1.0);
  EXPECT_TRUE(r.all_match());
}

TEST(CmdSolve, RandomSystemsMatchWithoutNoise) {
  qlinsolve::testing::for_all(100, 71, [](std::mt19937_64& rng) -> ::testing::AssertionResult {
    const int m = 2 + static_cast<int>(rng() % 2);
    ProblemFile p;
    p.a = qlinsolve::testing::random_feasible(rng, m);
    p.b = qlinsolve::testing::random_vector_in_ball(rng, m);
    p.protocol = (rng() % 2) ? Protocol::kCircuit : Protocol::kEmbedReduced;
    const RunReport r = cmd_solve(p);
    for (const auto& row : r.rows) {
      if (std::abs(*row.x_quantum - row.x_classical) > 1e-8 || !row.match) {
        return ::testing::AssertionFailure() << to_string(p.protocol) << " k=" << row.k;
      }
    }
    return ::testing::AssertionSuccess();
  });
}

TEST(CmdSolve, RescaleWorkflow) {
  ProblemFile p;
  p.a = Eigen::MatrixXd::Identity(2, 2) * 0.5;
  p.b = Eigen::Vector2d(0.3, 0.4);
  p.protocol = Protocol::kEmbedReduced;
  EXPECT_THROW(cmd_solve(p), InfeasibleEmbedding);
  const RunReport r = cmd_solve(p, true);
  EXPECT_DOUBLE_EQ(r.scale, 2.0);
  EXPECT_NEAR(*r.rows[0].x_quantum, 0.6, 1e-12);
  EXPECT_NEAR(*r.rows[1].x_quantum, 0.8, 1e-12);
  p.b = Eigen::Vector2d(3.0, 4.0);
  EXPECT_THROW(cmd_solve(p), NormTooLarge);
  const RunReport big = cmd_solve(p, true);
  EXPECT_DOUBLE_EQ(big.scale, 10.0);
  EXPECT_NEAR(*big.rows[1].x_quantum, 8.0, 1e-11);
  EXPECT_TRUE(big.all_match());
}

TEST(CmdSolve, SamplingAndCorrection) {
  ProblemFile p = load_problem(kData / "three_equations.json");
  p.noise = hw::NoiseModel{0.40013, -0.70437, 0.0, 0};
  p.shots = hw::ShotPlan{4, 200000};
  p.correction = hw::CorrectionModel{0.40013, -0.70437, 0.0, 0};
  const RunReport r = cmd_solve(p);
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.x_sq_sampled && row.corrected);
    EXPECT_NEAR(row.corrected->value, row.x_classical * row.x_classical, 0.01);
    EXPECT_TRUE(row.match);  // the exact amplitude is unaffected by sampling
  }
}

TEST(Run, SolveSummaryAndExitCode) {
  const auto r = invoke({"solve", (kData / "two_equations.json").string(), "--target-k", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0.73684211"), std::string::npos);
  EXPECT_NE(r.out.find("match"), std::string::npos);
}

TEST(Run, SingularExitsTwo) {
  const auto r = invoke({"solve", (kData / "singular.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("SingularMatrix"), std::string::npos);
}

TEST(Run, ParseErrorExitsOne) {
  const fs::path bad = write_problem("bad_syntax", "{\"matrix\": [[1, 2],\n [3, 4]\n");
  const auto r = invoke({"solve", bad.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad_syntax.json:"), std::string::npos);
  EXPECT_EQ(invoke({"solve", "/nonexistent/problem.json"}).code, 1);
  EXPECT_EQ(invoke({"solve", (kData / "two_equations.json").string(), "--noise", "1,2"}).code, 1);
  EXPECT_EQ(invoke({"solve", (kData / "two_equations.json").string(), "--protocol", "x"}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Run, InfeasibleExitsTwoUnlessRescaled) {
  const std::string file = (kData / "three_equations.json").string();
  const auto r = invoke({"solve", file, "--protocol", "embed-full"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("InfeasibleEmbedding"), std::string::npos);
  const auto s = invoke({"solve", file, "--protocol", "embed-full", "--rescale"});
  EXPECT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("RESCALED"), std::string::npos);
  const auto big = write_problem("big_b", R"({"matrix": [[1, 0], [0, 1]], "b": [0.9, 0.9]})");
  EXPECT_EQ(invoke({"solve", big.string()}).code, 2);
  EXPECT_EQ(invoke({"solve", big.string(), "--rescale"}).code, 0);
}

TEST(Run, DeterministicCsv) {
  const std::string file = (kData / "three_equations.json").string();
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const fs::path c = scratch("det_c");
  const std::vector<std::string> flags = {"--noise", "0.1,-0.2,0.02", "--shots", "1024", "--series", "4"};
  auto args = [&](const fs::path& dir, const std::string& seed) {
    std::vector<std::string> v = {"solve", file, "--out-dir", dir.string(), "--seed", seed};
    v.insert(v.end(), flags.begin(), flags.end());
    return v;
  };
  ASSERT_EQ(invoke(args(a, "5")).code, 0);
  ASSERT_EQ(invoke(args(b, "5")).code, 0);
  ASSERT_EQ(invoke(args(c, "6")).code, 0);
  EXPECT_EQ(slurp(a / "solve.csv"), slurp(b / "solve.csv"));
  EXPECT_NE(slurp(a / "solve.csv"), slurp(c / "solve.csv"));
  EXPECT_EQ(slurp(a / "solve.csv").substr(0, 2), "k,");
}

TEST(Run, Feasibility) {
  const auto r = invoke({"feasibility", (kData / "three_equations.json").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("||b|| = 0.99498744"), std::string::npos);
  EXPECT_NE(r.out.find("reduced embedding: every variable"), std::string::npos);
  EXPECT_NE(r.out.find("full embedding: infeasible"), std::string::npos);
}

TEST(Run, Embed) {
  const fs::path dir = scratch("embed");
  const auto r = invoke({"embed", (kData / "two_equations.json").string(), "--protocol", "embed-full",
                         "--out-dir", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "embedding.csv"));
  EXPECT_EQ(invoke({"embed", (kData / "two_equations.json").string()}).code, 1);
}

TEST(Run, CalibrateAndApply) {
  const fs::path dir = scratch("calibrate");
  const auto r = invoke({"calibrate", (kData / "calibrate.json").string(), "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"correction.json", "errors.csv", "raw_errors.dat", "corrected_errors.dat",
                        "relative_errors.dat", "transfer_errors.csv", "transfer_raw_errors.dat",
                        "transfer_corrected_errors.dat"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const hw::CorrectionModel m = load_correction(dir / "correction.json");
  EXPECT_NEAR(m.intercept, 0.40013, 0.05);
  EXPECT_NEAR(m.slope, -0.70437, 0.05);
  EXPECT_EQ(m.points, 26u);

  const auto s = invoke({"solve", (kData / "three_equations.json").string(), "--noise", "0.40013,-0.70437,0.02",
                         "--correction", (dir / "correction.json").string()});
  EXPECT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("X "), std::string::npos);
}

TEST(Run, CalibrateZeroNoise) {
  const fs::path p = write_problem("cal_zero", R"({
    "matrix": [[0.9, -0.6, -1.8], [1.6, -0.5, -0.6], [0.8, -1.4, -0.5]], "seed": 3})");
  const fs::path dir = scratch("calibrate_zero");
  ASSERT_EQ(invoke({"calibrate", p.string(), "--out-dir", dir.string()}).code, 0);
  const hw::CorrectionModel m = load_correction(dir / "correction.json");
  EXPECT_NEAR(m.intercept, 0.0, 0.02);
  EXPECT_NEAR(m.slope, 0.0, 0.04);
}

TEST(Run, ChainFitSingleVariable) {
  const fs::path dir = scratch("chain");
  const auto r = invoke({"chain-fit", (kData / "three_equations.json").string(), "--target-k", "3",
                         "--out-dir", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir / "chain_parameters.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x_i,d_2,d_3,omega_1,omega_2,omega_3,omega_4,t_min,residual");
  EXPECT_NE(r.out.find("total evolution time"), std::string::npos);
}

}  // namespace
}  // namespace qlinsolve::cli
