#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hckit/cli.hpp"

using namespace hckit;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "hckit");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content = {}) {
  const auto p = std::filesystem::temp_directory_path() / ("hckit_test_" + name);
  if (!content.empty()) std::ofstream(p) << content;
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, VerifyExitCodes) {
  const Outcome ok = run({"verify", "ex2", "--grid", "8"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const json j = json::parse(ok.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["example"], "ex2");
  EXPECT_TRUE(j["pass"]);

  const auto bad = temp_file("bad.json", R"({"example": "ex1", "params": {"a": 1, "b": 2, "c": 1.5, "a_p": 2, "b_p": 1.5, "c_p": 2}})");
  EXPECT_EQ(run({"verify", "ex1", "--params", bad.string()}).code, 2);
  const auto ex2 = temp_file("ex2.json", R"({"example": "ex2", "params": {"a": 2, "b": 1, "c": 1.5707963267948966, "a_p": 3, "b_p": 2}})");
  EXPECT_EQ(run({"verify", "ex2", "--params", ex2.string(), "--grid", "8"}).code, 0);
  EXPECT_EQ(run({"verify", "ex1", "--params", ex2.string()}).code, 2);
  const auto garbage = temp_file("garbage.json", "{not json");
  EXPECT_EQ(run({"verify", "ex1", "--params", garbage.string()}).code, 2);
  EXPECT_EQ(run({"verify", "ex1", "--params", "/nonexistent/p.json"}).code, 2);
  EXPECT_EQ(run({"verify", "ex7"}).code, 2);
  EXPECT_EQ(run({"verify", "ex1", "--tol", "0"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, VerifyReportsCheckFailures) {
  // an impossible tolerance on the closed-form comparisons
  const Outcome r = run({"verify", "ex2", "--tol", "1e-300", "--grid", "6"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(json::parse(r.out)["pass"]);
}

TEST(Cli, Trace) {
  const Outcome r = run({"trace", "pi_dw2", "--start", "1,0.5", "--steps", "200"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCurveCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 201);

  const Outcome empty = run({"trace", "dz2", "--start", "0,1,0", "--steps", "0"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.out, std::string(kCurveCsvHeader) + "\n");

  const Outcome zero = run({"trace", "pi_dw2", "--start", "0,0,0"});
  EXPECT_EQ(zero.code, 1);
  EXPECT_NE(zero.out.find("# status=HitZero"), std::string::npos);

  EXPECT_EQ(run({"trace", "pi_dw2_over_w2", "--start", "0,0,0"}).code, 2);  // outside the domain
  EXPECT_EQ(run({"trace", "dz2", "--start", "1,x"}).code, 2);
  EXPECT_EQ(run({"trace", "dz2", "--mode", "diagonal"}).code, 2);
  EXPECT_EQ(run({"trace", "ex1_f0"}).code, 2);
}

TEST(Cli, TraceMatchesClosedForm) {
  const Outcome r = run({"trace", "dz2", "--start", "0,1,0", "--steps", "1000"});
  ASSERT_EQ(r.code, 0);
  // horizontal through (i, 0): (s + i, 2s)
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  double worst = 0.0;
  while (std::getline(in, line)) {
    double v[7];
    std::istringstream row(line);
    for (double& x : v) {
      std::string cell;
      std::getline(row, cell, ',');
      x = std::stod(cell);
    }
    worst = std::max({worst, std::abs(v[1] - v[0]), std::abs(v[2] - 1.0), std::abs(v[3] - 2 * v[0])});
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Cli, Modulus) {
  const Outcome r = run({"modulus", "ex2_radii", "rho0", "--grid", "16"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["energy"].get<double>(), 8 * 2 * (kPi / 2) / 27, 1e-6);
  EXPECT_NEAR(j["margin"].get<double>(), 1.0, 1e-9);

  const Outcome ineq = run({"modulus", "ex2_radii", "rho0", "--grid", "12", "--map", "ex2_f0"});
  EXPECT_EQ(ineq.code, 0) << ineq.err;
  EXPECT_EQ(json::parse(ineq.out)["inequalities"]["inequalities"].size(), 4u);

  EXPECT_EQ(run({"modulus", "ex2_radii", "ex3_rho"}).code, 2);
  EXPECT_EQ(run({"modulus", "rho0", "ex2_radii"}).code, 2);
}

TEST(Cli, DistortionAndOperators) {
  const Outcome d = run({"distortion", "ex1_f0", "--grid", "8"});
  ASSERT_EQ(d.code, 0) << d.err;
  const json dj = json::parse(d.out);
  EXPECT_LT(dj["K_spread"].get<double>(), 1e-10);
  EXPECT_NEAR(dj["K_max"].get<double>(), 2.0 / 0.75, 1e-10);

  const Outcome o = run({"operators", "pi_dw2"});
  ASSERT_EQ(o.code, 0);
  const json oj = json::parse(o.out);
  EXPECT_LT(oj["D2prime_max"].get<double>(), 1e-9);
  EXPECT_LT(oj["D2second_max"].get<double>(), 1e-9);
  EXPECT_TRUE(oj["B2_nonzero"]);
  EXPECT_EQ(run({"operators", "dz3"}).code, 2);
}

TEST(Cli, OutputFile) {
  const auto path = temp_file("report.json");
  std::filesystem::remove(path);
  const Outcome r = run({"operators", "dz2", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(slurp(path))["qd"], "dz2");
  EXPECT_EQ(run({"operators", "dz2", "--out", "/nonexistent/dir/r.json"}).code, 2);
}

TEST(Cli, SameSeedSameBytes) {
  for (const std::vector<std::string>& args :
       std::vector<std::vector<std::string>>{{"verify", "ex2", "--grid", "8", "--seed", "7"},
                                             {"distortion", "ex2_f0", "--grid", "8", "--seed", "7"},
                                             {"operators", "pi_dw2_over_w2", "--seed", "7"},
                                             {"trace", "pi_dw2", "--start", "1,0.5", "--steps", "100"}}) {
    const Outcome a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << args[0];
  }
  EXPECT_NE(run({"distortion", "ex2_f0", "--grid", "4", "--seed", "1"}).out,
            run({"distortion", "ex2_f0", "--grid", "4", "--seed", "2"}).out);
}
