#include <gtest/gtest.h>

#include <filesystem>

#include "hyperfind/driver.hpp"
#include "test_support.hpp"

using namespace hyperfind;
using namespace hyperfind::driver;

namespace {

SearchOptions options(std::size_t n) {
  SearchOptions o = SearchOptions::with_solver(hftest::solver());
  o.max_observations = n;
  return o;
}

Verdict lazy(const std::string &fixture, std::size_t n) {
  return run(hftest::load_fixture(fixture).spec, Algorithm::Lazy, options(n));
}

Verdict naive(const std::string &fixture, std::size_t n) {
  return run(hftest::load_fixture(fixture).spec, Algorithm::Naive, options(n));
}

logic::Value at(const concrete::State &s, const std::string &var) { return s.mem.at(var); }

}  // namespace

TEST(Generalize, GniBecomesProductThenExistential) {
  auto p = hftest::load_fixture("gni.hyp");
  HyperSpec g = generalize(p.spec);
  ASSERT_EQ(g.quantifiers.size(), 2u);
  const auto &u = g.quantifiers[0];
  EXPECT_EQ(u.kind, QuantKind::Forall);
  EXPECT_EQ(u.members, (std::vector<std::string>{"p1", "p2"}));
  EXPECT_TRUE(u.graph->has_variable("p1.sec"));
  EXPECT_TRUE(u.graph->has_variable("p2.sec"));
  EXPECT_TRUE(graph::validate(*u.graph, u.observed).empty());
  EXPECT_EQ(g.quantifiers[1].kind, QuantKind::Exists);
  EXPECT_EQ(g.quantifiers[1].trace, "p3");
  EXPECT_EQ(g.body, p.spec.body);
}

TEST(Generalize, ForallExistsUnchanged) {
  auto p = hftest::load_fixture("voting_buggy.hyp");
  HyperSpec g = generalize(p.spec);
  ASSERT_EQ(g.quantifiers.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(g.quantifiers[i].graph, p.spec.quantifiers[i].graph);
    EXPECT_EQ(g.quantifiers[i].trace, p.spec.quantifiers[i].trace);
  }
}

TEST(Generalize, ForallForallHasNoExistential) {
  auto p = frontend::load(
      "prog d { havoc i; out := i % 2; observe o; }\n"
      "forall a in d . forall b in d . always (i@a != i@b || out@a == out@b)");
  HyperSpec g = generalize(p.spec);
  ASSERT_EQ(g.quantifiers.size(), 1u);
  EXPECT_EQ(g.quantifiers[0].kind, QuantKind::Forall);
  Verdict v = run(p.spec, Algorithm::Lazy, options(2));
  EXPECT_EQ(v.kind, VerdictKind::NoBugUpTo);
}

TEST(LazySearch, BuggyVoting) {
  Verdict v = lazy("voting_buggy.hyp", 4);
  ASSERT_EQ(v.kind, VerdictKind::BugFound);
  EXPECT_EQ(v.k, 2u);
  ASSERT_TRUE(v.counterexample);
  const auto &obs = v.counterexample->observed;
  ASSERT_EQ(obs.size(), 2u);
  for (const auto &s : obs) {
    EXPECT_EQ(at(s, "p1.countA"), 0);
    EXPECT_EQ(at(s, "p1.countB"), 1);
  }
  EXPECT_TRUE(v.counterexample->replay.valid) << v.counterexample->replay.reason;
}

TEST(LazySearch, CorrectVoting) {
  Verdict v = lazy("voting_correct.hyp", 4);
  EXPECT_EQ(v.kind, VerdictKind::NoBugUpTo);
  EXPECT_EQ(v.k, 4u);
}

TEST(LazySearch, Refinement) {
  Verdict holds = lazy("min_flip.hyp", 3);
  EXPECT_EQ(holds.kind, VerdictKind::NoBugUpTo);
  EXPECT_EQ(holds.k, 3u);

  Verdict bug = lazy("flip_min.hyp", 3);
  ASSERT_EQ(bug.kind, VerdictKind::BugFound);
  EXPECT_EQ(bug.k, 1u);
  const auto &s = bug.counterexample->observed.at(0);
  EXPECT_EQ(at(s, "p1.out"), std::max(at(s, "p1.x"), at(s, "p1.y")));
  EXPECT_NE(at(s, "p1.x"), at(s, "p1.y"));
}

TEST(LazySearch, Gni) {
  Verdict v = lazy("gni.hyp", 2);
  EXPECT_EQ(v.kind, VerdictKind::NoBugUpTo);
  Verdict echo = lazy("echo_server.hyp", 3);
  ASSERT_EQ(echo.kind, VerdictKind::BugFound);
  EXPECT_EQ(echo.k, 1u);
  EXPECT_TRUE(echo.counterexample->replay.valid);
}

TEST(LazySearch, FactorialIsInconclusive) {
  Verdict v = lazy("factorial.hyp", 3);
  EXPECT_EQ(v.kind, VerdictKind::Inconclusive);
  EXPECT_EQ(v.reason, InconclusiveReason::Budget);
}

TEST(LazySearch, UnknownNeverBecomesABug) {
  SearchOptions o = options(3);
  o.query = solver::SolverConfig{"/bin/sh", {"-c", "cat > /dev/null"}, "LIA", std::chrono::milliseconds(100)};
  Verdict v = run(hftest::load_fixture("voting_buggy.hyp").spec, Algorithm::Lazy, o);
  EXPECT_EQ(v.kind, VerdictKind::Inconclusive);
  EXPECT_EQ(v.reason, InconclusiveReason::SolverUnknown);
}

TEST(LazySearch, DeterministicAndMonotone) {
  Verdict a = lazy("voting_buggy.hyp", 2);
  Verdict b = lazy("voting_buggy.hyp", 4);
  ASSERT_EQ(a.kind, VerdictKind::BugFound);
  ASSERT_EQ(b.kind, VerdictKind::BugFound);
  EXPECT_EQ(a.k, b.k);
  EXPECT_EQ(a.counterexample->full, b.counterexample->full);
  EXPECT_EQ(a.counterexample->model, b.counterexample->model);
}

TEST(LazySearch, CounterexamplesAreOracleConfirmed) {
  for (const char *name : {"voting_buggy.hyp", "flip_min.hyp", "two_location.hyp", "simple_nonrefinement.hyp",
                           "conditional_nonrefinement.hyp"}) {
    auto p = hftest::load_fixture(name);
    SearchOptions o = options(3);
    o.domain = std::make_pair(logic::Value{0}, logic::Value{1});
    Verdict v = run(p.spec, Algorithm::Lazy, o);
    auto oracle = concrete::oracle_check(p.spec, 3, concrete::Domain({0, 1}));
    ASSERT_EQ(v.kind, VerdictKind::BugFound) << name;
    EXPECT_TRUE(v.counterexample->replay.valid) << name;
    EXPECT_EQ(oracle.outcome, concrete::OracleOutcome::Violated) << name;
    EXPECT_EQ(oracle.k, v.k) << name;
  }
}

TEST(LazySearch, EmitsQueries) {
  auto dir = std::filesystem::temp_directory_path() / "hyperfind_emit_test";
  std::filesystem::remove_all(dir);
  SearchOptions o = options(2);
  o.emit_smt_dir = dir.string();
  run(hftest::load_fixture("voting_buggy.hyp").spec, Algorithm::Lazy, o);
  EXPECT_TRUE(std::filesystem::exists(dir / "k1_q0.smt2"));
  EXPECT_TRUE(std::filesystem::exists(dir / "k2_q0.smt2"));
  std::filesystem::remove_all(dir);
}

TEST(NaiveSearch, TwoLocationGraph) {
  Verdict v = naive("two_location.hyp", 3);
  EXPECT_EQ(v.kind, VerdictKind::BugFound);
  EXPECT_EQ(v.k, 1u);
  EXPECT_FALSE(v.counterexample);
}

TEST(NaiveSearch, Voting) {
  Verdict bug = naive("voting_buggy.hyp", 2);
  EXPECT_EQ(bug.kind, VerdictKind::BugFound);
  EXPECT_EQ(bug.k, 2u);
  Verdict ok = naive("voting_correct.hyp", 3);
  EXPECT_EQ(ok.kind, VerdictKind::NoBugUpTo);
  EXPECT_EQ(ok.k, 3u);
}

TEST(NaiveSearch, AgreesWithLazy) {
  for (const char *name : {"voting_buggy.hyp", "voting_correct.hyp", "min_flip.hyp", "flip_min.hyp", "gni.hyp",
                           "simple_leak.hyp", "conditional_nonrefinement.hyp"}) {
    Verdict l = lazy(name, 3), n = naive(name, 3);
    EXPECT_EQ(l.kind, n.kind) << name;
    EXPECT_EQ(l.k, n.k) << name;
  }
}
