#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

const std::string kSamples = MUCALC_SAMPLES_DIR;
const std::string kM3 = kSamples + "/m3.json";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  const int code = mucalc::cli::dispatch(args, out, err, in);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("mucalc_test_" + name)).string();
}

}  // namespace

TEST(Cli, CheckGtsAtState) {
  const auto r = run({"check", "--model", kM3, "--formula", "mu X.(p|<>X)", "--gamma", "3", "--semantics", "gts",
                      "--state", "w0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "true\n");
}

TEST(Cli, CheckFalseExitsOne) {
  const auto r = run({"check", "--model", kM3, "--formula", "mu X.(p|<>X)", "--gamma", "2", "--semantics", "comp",
                      "--state", "w0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "false\n");
}

TEST(Cli, CheckAllStates) {
  const auto r = run({"check", "--model", kM3, "--formula", "mu X.(p|<>X)", "--gamma", "2", "--semantics", "gts"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "w0: false\nw1: true\nw2: true\n");
}

TEST(Cli, CheckJson) {
  const auto r = run({"check", "--model", kM3, "--formula", "mu X.(p|<>X)", "--gamma", "3", "--semantics", "comp",
                      "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["gamma"], "3");
  EXPECT_EQ(j["results"], nlohmann::json::parse(R"({"w0": true, "w1": true, "w2": true})"));
  EXPECT_EQ(j["all_true"], true);
}

TEST(Cli, TransfiniteBoundOnlyForCompositional) {
  const std::vector<std::string> base{"check", "--model", kM3, "--formula", "mu X.(p|<>X)", "--gamma", "w"};
  auto comp = base;
  comp.insert(comp.end(), {"--semantics", "comp"});
  EXPECT_EQ(run(comp).code, 0);
  auto gts = base;
  gts.insert(gts.end(), {"--semantics", "gts"});
  const auto r = run(gts);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("finite"), std::string::npos);
}

TEST(Cli, StandardWarnsAboutGamma) {
  const auto r = run({"check", "--model", kSamples + "/m3_all_p.json", "--formula", "nu X.(p & <>X)", "--gamma", "2",
                      "--semantics", "standard", "--state", "w0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "false\n");
  EXPECT_NE(r.err.find("ignored"), std::string::npos);
}

TEST(Cli, FormulaFile) {
  const std::string path = temp_path("formula.txt");
  std::ofstream(path) << "nu X. (p & <>X)\n";
  const auto r = run({"check", "--model", kSamples + "/two_cycle.json", "--formula-file", path, "--semantics",
                      "standard"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::remove(path.c_str());
}

TEST(Cli, UsageAndInputErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check", "--model", kM3, "--formula", "p", "--semantics", "bogus"}).code, 2);
  EXPECT_EQ(run({"check", "--model", kM3, "--semantics", "comp", "--gamma", "1"}).code, 2);
  EXPECT_EQ(run({"check", "--model", kM3, "--formula", "p", "--semantics", "comp"}).code, 2);
  EXPECT_EQ(run({"check", "--model", kM3, "--formula", "p", "--semantics", "comp", "--gamma", "0"}).code, 2);
  EXPECT_EQ(run({"check", "--model", kM3, "--formula", "~(p|q)", "--semantics", "standard"}).code, 2);
  EXPECT_EQ(run({"check", "--model", kM3, "--formula", "X", "--semantics", "standard"}).code, 2);
  EXPECT_EQ(run({"check", "--model", "/nonexistent.json", "--formula", "p", "--semantics", "standard"}).code, 2);
  const auto r = run({"check", "--model", kM3, "--formula", "p", "--semantics", "standard", "--state", "zz"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, GameWritesDot) {
  const std::string path = temp_path("tree.dot");
  const auto r = run({"game", "--model", kM3, "--formula", "mu X.(p|<>X)", "--gamma", "3", "--emit-dot", path,
                      "--max-nodes", "50"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("winner: Eloise"), std::string::npos);
  std::ifstream in(path);
  std::stringstream dot;
  dot << in.rdbuf();
  EXPECT_EQ(dot.str().rfind("digraph game_tree", 0), 0u);
  std::remove(path.c_str());
}

TEST(Cli, TraceWithSolvedStrategies) {
  const auto r = run({"trace", "--model", kM3, "--formula", "mu X.(p|<>X)", "--gamma", "3", "--state", "w0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0. (w0, mu X. (p | <>X), {X:3})  Eloise: announce 2"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("winner: Eloise"), std::string::npos);
}

TEST(Cli, TraceFromStdinAndScript) {
  const auto r = run({"trace", "--model", kM3, "--formula", "mu X.(p|<>X)", "--gamma", "3", "--eloise", "stdin"},
                     "2 right w1 1 left\n");
  EXPECT_EQ(r.code, 1) << r.err;
  EXPECT_NE(r.out.find("winner: Abelard"), std::string::npos);
  EXPECT_NE(r.out.find("length: 5"), std::string::npos);

  const std::string path = temp_path("script.txt");
  std::ofstream(path) << "3\n";
  const auto bad = run({"trace", "--model", kM3, "--formula", "mu X.(p|<>X)", "--gamma", "3", "--eloise", "script",
                        path});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("{0, 1, 2}"), std::string::npos) << bad.err;
  std::remove(path.c_str());
}

TEST(Cli, DiffSummary) {
  const auto r = run({"diff", "--seed", "7", "--instances", "100", "--jobs", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "100/100 pass\n");
  const auto j = run({"diff", "--seed", "7", "--instances", "5", "--format", "json"});
  EXPECT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out)["passed"], 5);
}

TEST(Cli, GenIsDeterministic) {
  const auto a = run({"gen", "model", "--seed", "4"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, run({"gen", "model", "--seed", "4"}).out);
  EXPECT_NO_THROW(mucalc::load_model(a.out));
  const auto f = run({"gen", "formula", "--seed", "4"});
  EXPECT_EQ(f.code, 0);
  EXPECT_TRUE(mucalc::is_sentence(mucalc::parse_formula(f.out)));

  const std::string path = temp_path("params.json");
  std::ofstream(path) << R"({"max_states": 2, "prop_count": 1})";
  const auto small = run({"gen", "model", "--seed", "4", "--params", path});
  EXPECT_EQ(small.code, 0);
  EXPECT_EQ(mucalc::load_model(small.out).size(), 2u);
  std::ofstream(path) << R"({"nope": 2})";
  EXPECT_EQ(run({"gen", "model", "--seed", "4", "--params", path}).code, 2);
  std::remove(path.c_str());
}
