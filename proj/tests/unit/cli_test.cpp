#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "hyperfind/bench.hpp"
#include "test_support.hpp"

using nlohmann::json;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string &args) {
  CliRun r;
  std::string cmd = std::string(HYPERFIND_CLI) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST(Cli, BuggyVotingReportsCounterexample) {
  CliRun r = run(hftest::fixture("voting_buggy.hyp"));
  EXPECT_EQ(r.status, 1);
  json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "bug_found");
  EXPECT_EQ(j["k"], 2);
  ASSERT_TRUE(j["counterexample"].is_object());
  EXPECT_EQ(j["counterexample"]["observed_trace"].size(), 2u);
  EXPECT_TRUE(j["counterexample"]["full_trace"].is_array());
  EXPECT_TRUE(j["counterexample"]["model"].is_object());
  EXPECT_TRUE(j["counterexample"]["explanation_smt"].is_string());
  EXPECT_EQ(j["counterexample"]["replay_valid"], true);
  for (const char *key : {"combinations", "sat_calls", "wall_ms"}) EXPECT_TRUE(j["stats"].contains(key)) << key;
}

TEST(Cli, RefinementHolds) {
  CliRun r = run(hftest::fixture("min_flip.hyp") + " --max-observations 3");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(json::parse(r.out)["verdict"], "no_bug_up_to");
}

TEST(Cli, FactorialIsInconclusive) {
  CliRun r = run(hftest::fixture("factorial.hyp"));
  EXPECT_EQ(r.status, 2);
  json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "inconclusive");
  EXPECT_EQ(j["reason"], "budget");
}

TEST(Cli, InputErrorsExitThree) {
  auto bad = std::filesystem::temp_directory_path() / "hyperfind_cli_bad.hyp";
  std::ofstream(bad) << "prog p { x := x * x; observe; } forall a in p . always (true)";
  EXPECT_EQ(run(bad.string()).status, 3);
  EXPECT_EQ(run("/nonexistent/file.hyp").status, 3);
  std::filesystem::remove(bad);
}

TEST(Cli, NaiveAndText) {
  CliRun r = run(hftest::fixture("two_location.hyp") + " --algorithm naive --report text");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("bug found at k=1"), std::string::npos) << r.out;
}

TEST(Cli, OracleMode) {
  CliRun r = run(hftest::fixture("voting_buggy.hyp") + " --oracle --domain 0..1 --max-observations 3");
  EXPECT_EQ(r.status, 1);
  json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "violated");
  EXPECT_EQ(j["k"], 2);
}

TEST(Bench, MissingFileBecomesErrorRow) {
  auto dir = std::filesystem::temp_directory_path() / "hyperfind_bench_test";
  std::filesystem::create_directories(dir);
  std::filesystem::copy_file(hftest::fixture("voting_buggy.hyp"), dir / "voting.hyp",
                             std::filesystem::copy_options::overwrite_existing);
  std::ofstream(dir / "manifest.json") << R"([
    {"name": "voting", "file": "voting.hyp", "max_observations": 3, "repetitions": 1},
    {"name": "missing", "file": "does_not_exist.hyp", "max_observations": 3, "repetitions": 1}
  ])";
  auto instances = hyperfind::bench::load_manifest((dir / "manifest.json").string());
  ASSERT_EQ(instances.size(), 2u);
  auto results =
      hyperfind::bench::run(instances, hyperfind::driver::SearchOptions::with_solver(hftest::solver()));
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0].verdict, "bug_found");
  EXPECT_EQ(results[0].k, std::optional<std::size_t>(2));
  EXPECT_EQ(results[1].verdict, "error");
  EXPECT_FALSE(results[1].error.empty());
  std::filesystem::remove_all(dir);
}

TEST(Bench, ToolReportsErrorRowAsJson) {
  auto dir = std::filesystem::temp_directory_path() / "hyperfind_bench_tool_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "manifest.json") << R"([{"name": "gone", "file": "gone.hyp", "repetitions": 1}])";
  std::string cmd = std::string(HYPERFIND_BENCH) + " " + (dir / "manifest.json").string() + " --json " +
                    (dir / "out.json").string() + " > /dev/null 2>&1";
  int st = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(st));
  EXPECT_EQ(WEXITSTATUS(st), 0);
  std::ifstream in(dir / "out.json");
  json j = json::parse(in);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["name"], "gone");
  EXPECT_EQ(j[0]["verdict"], "error");
  std::filesystem::remove_all(dir);
}
