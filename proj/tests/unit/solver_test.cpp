#include <gtest/gtest.h>

#include <random>

#include "hyperfind/solver.hpp"
#include "test_support.hpp"

using namespace hyperfind;
using namespace hyperfind::logic;
using namespace hyperfind::solver;

namespace {

Term v0() { return mk_var("v0"); }

}  // namespace

TEST(SolverOneShot, SatWithModel) {
  auto r = check_sat(hftest::solver(), mk_and(mk_cmp(CmpOp::Gt, v0(), mk_int(0)), mk_cmp(CmpOp::Lt, v0(), mk_int(2))),
                     {"v0"});
  ASSERT_TRUE(r.sat());
  EXPECT_EQ(r.model, (Assignment{{"v0", 1}}));
}

TEST(SolverOneShot, Unsat) {
  auto r = check_sat(hftest::solver(), mk_and(mk_cmp(CmpOp::Gt, v0(), mk_int(0)), mk_cmp(CmpOp::Lt, v0(), mk_int(1))),
                     {"v0"});
  EXPECT_TRUE(r.unsat());
}

TEST(SolverOneShot, QuantifiedUnsatOverIntegers) {
  // Every v0 has a v1 equal to it.
  auto r = check_sat(hftest::solver(), mk_forall({"v1"}, mk_not(mk_eq(mk_var("v1"), v0()))), {"v0"});
  EXPECT_TRUE(r.unsat());
}

TEST(SolverOneShot, DontCareVariablesCompleteToZero) {
  auto r = check_sat(hftest::solver(), mk_cmp(CmpOp::Gt, v0(), mk_int(4)), {"v0", "unused"});
  ASSERT_TRUE(r.sat());
  EXPECT_EQ(r.model.at("unused"), 0);
  EXPECT_GT(r.model.at("v0"), 4);
}

TEST(SolverOneShot, QuotedNamesSurviveTheModel) {
  auto r = check_sat(hftest::solver(), mk_eq(mk_var("p1.x y"), mk_int(-3)), {"p1.x y"});
  ASSERT_TRUE(r.sat());
  EXPECT_EQ(r.model.at("p1.x y"), -3);
}

TEST(SolverSession, PushPopScopes) {
  Session s(hftest::solver());
  s.declare("v0");
  s.push();
  s.assert_formula(mk_cmp(CmpOp::Gt, v0(), mk_int(0)));
  EXPECT_TRUE(s.check().sat());
  s.pop();
  s.assert_formula(mk_cmp(CmpOp::Lt, v0(), mk_int(0)));
  auto r = s.check({"v0"});
  ASSERT_TRUE(r.sat());
  EXPECT_LT(r.model.at("v0"), 0);
  EXPECT_EQ(s.checks(), 2u);
}

TEST(SolverSession, UndeclaredVariableIsAContractError) {
  Session s(hftest::solver());
  EXPECT_THROW(s.assert_formula(mk_eq(v0(), mk_int(1))), std::logic_error);
}

TEST(SolverSession, Depth) {
  Session s(hftest::solver());
  s.push();
  s.push();
  s.pop();
  EXPECT_EQ(s.depth(), 1u);
  s.pop();
  EXPECT_THROW(s.pop(), std::logic_error);
}

TEST(SolverSession, DeclarationsAreScoped) {
  Session s(hftest::solver());
  s.push();
  s.declare("v0");
  s.declare("v0");  // idempotent
  EXPECT_TRUE(s.declared("v0"));
  s.pop();
  EXPECT_FALSE(s.declared("v0"));
  s.declare("v0");
  s.assert_formula(mk_eq(v0(), mk_int(3)));
  EXPECT_TRUE(s.check().sat());
}

TEST(SolverSession, TimeoutIsUnknownAndSessionRecovers) {
  // A "solver" that never answers.
  SolverConfig hung{"/bin/sh", {"-c", "cat > /dev/null"}, "LIA", std::chrono::milliseconds(200)};
  Session s(hung);
  auto r = s.check();
  EXPECT_TRUE(r.unknown());
  EXPECT_EQ(r.reason, "timeout");
  auto again = s.check();
  EXPECT_TRUE(again.unknown());
}

TEST(SolverSession, RestartReplaysScopes) {
  SolverConfig cfg = hftest::solver();
  Session s(cfg);
  s.declare("v0");
  s.assert_formula(mk_cmp(CmpOp::Gt, v0(), mk_int(10)));
  s.push();
  s.assert_formula(mk_cmp(CmpOp::Lt, v0(), mk_int(12)));
  // Force the process to die by timing out an impossible deadline once.
  s.set_timeout(std::chrono::milliseconds(0));
  s.check();
  s.set_timeout(std::chrono::milliseconds(5000));
  auto r = s.check({"v0"});
  ASSERT_TRUE(r.sat());
  EXPECT_EQ(r.model.at("v0"), 11);
}

TEST(SolverProcess, MissingExecutable) {
  SolverConfig cfg{"/nonexistent/solver", {}, "LIA", std::chrono::milliseconds(1000)};
  EXPECT_THROW(check_sat(cfg, mk_true(), {}), SolverError);
}

TEST(SolverProcess, CrashIsATransportError) {
  SolverConfig cfg{"/bin/sh", {"-c", "exit 0"}, "LIA", std::chrono::milliseconds(2000)};
  EXPECT_THROW(check_sat(cfg, mk_true(), {}), SolverError);
}

TEST(SolverProcess, DefaultArguments) {
  EXPECT_EQ(default_args("/usr/bin/z3"), (std::vector<std::string>{"-in", "-smt2"}));
  EXPECT_TRUE(default_args("/opt/other-solver").empty());
}

TEST(SolverProperty, ModelsSatisfyQuantifierFreeFormulas) {
  std::mt19937 rng(99);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const std::vector<std::string> vars = {"a", "b", "c"};
  auto term = [&] {
    Term t = mk_mul(mk_int(pick(-3, 3)), mk_var(vars[pick(0, 2)]));
    return mk_add(t, pick(0, 1) ? mk_mod(mk_var(vars[pick(0, 2)]), pick(2, 3)) : mk_int(pick(-5, 5)));
  };
  static const CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
  Session s(hftest::solver());
  for (const auto &v : vars) s.declare(v);
  int sat = 0;
  for (int i = 0; i < 60; ++i) {
    std::vector<Formula> parts;
    for (int j = 0; j < 3; ++j) parts.push_back(mk_cmp(ops[pick(0, 5)], term(), term()));
    Formula f = pick(0, 1) ? mk_and(parts) : mk_or(mk_and(parts[0], parts[1]), mk_not(parts[2]));
    s.push();
    s.assert_formula(f);
    auto r = s.check({vars.begin(), vars.end()});
    s.pop();
    if (r.sat()) {
      ++sat;
      EXPECT_TRUE(eval(f, r.model)) << f;
    }
  }
  EXPECT_GT(sat, 0);
}
