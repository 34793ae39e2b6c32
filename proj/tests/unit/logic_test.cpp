#include <gtest/gtest.h>

#include "hyperfind/logic.hpp"
#include "properties.hpp"

using namespace hyperfind::logic;

namespace {

Term x() { return mk_var("x"); }
Term y() { return mk_var("y"); }

}  // namespace

TEST(LogicEval, LiteralArithmetic) {
  EXPECT_EQ(eval(mk_add(x(), mk_int(1)), {{"x", 2}}), 3);
  EXPECT_EQ(eval(mk_mul(mk_int(2), x()), {{"x", 3}}), 6);
}

TEST(LogicEval, UnboundVariableNamesTheVariable) {
  try {
    eval(x(), {{"y", 0}});
    FAIL() << "expected EvalError";
  } catch (const EvalError &e) {
    EXPECT_NE(std::string(e.what()).find("x"), std::string::npos);
  }
}

TEST(LogicEval, Comparisons) {
  EXPECT_TRUE(eval(mk_cmp(CmpOp::Gt, x(), mk_int(0)), {{"x", 1}}));
  EXPECT_FALSE(eval(mk_eq(x(), y()), {{"x", 2}, {"y", 3}}));
}

TEST(LogicEval, QuantifiedFormulaIsUnsupported) {
  Formula f = mk_forall({"v"}, mk_cmp(CmpOp::Ge, mk_var("v"), mk_int(0)));
  EXPECT_THROW(eval(f, {}), EvalError);
}

TEST(LogicEval, EuclideanDivisionMatchesSmtLib) {
  // SMT-LIB: the remainder is always non-negative.
  EXPECT_EQ(eval(mk_mod(x(), 2), {{"x", -3}}), 1);
  EXPECT_EQ(eval(mk_div(x(), 2), {{"x", -3}}), -2);
  EXPECT_EQ(eval(mk_div(x(), -2), {{"x", 7}}), -3);
  EXPECT_EQ(eval(mk_mod(x(), -2), {{"x", 7}}), 1);
}

TEST(LogicTerms, NonlinearProductRejected) {
  EXPECT_THROW(mk_mul(x(), y()), NonlinearError);
  EXPECT_THROW(mk_div(x(), 0), NonlinearError);
}

TEST(LogicSubstitute, ReplacesVariables) {
  Term t = substitute(mk_add(x(), y()), {{"x", mk_add(mk_var("z"), mk_int(1))}});
  EXPECT_EQ(t, mk_add(mk_add(mk_var("z"), mk_int(1)), y()));
}

TEST(LogicSubstitute, IdentityIsStructurallyEqual) {
  Formula f = mk_cmp(CmpOp::Gt, x(), mk_int(0));
  EXPECT_EQ(substitute(f, {{"x", x()}}), f);
}

TEST(LogicSubstitute, AvoidsCapture) {
  Formula f = mk_exists({"v"}, mk_eq(mk_var("v"), x()));
  Formula g = substitute(f, {{"x", mk_var("v")}});
  ASSERT_EQ(g.kind(), FormulaKind::Exists);
  ASSERT_EQ(g.bound().size(), 1u);
  const std::string renamed = g.bound()[0];
  EXPECT_NE(renamed, "v");
  EXPECT_EQ(g.body(), mk_eq(mk_var(renamed), mk_var("v")));
  EXPECT_EQ(free_vars(g), VarSet{"v"});
}

TEST(LogicSubstitute, BoundVariablesAreNotReplaced) {
  Formula f = mk_forall({"x"}, mk_eq(x(), y()));
  EXPECT_EQ(substitute(f, {{"x", mk_int(5)}}), f);
}

TEST(LogicFreeVars, Examples) {
  EXPECT_EQ(free_vars(mk_add(x(), mk_int(1))), VarSet{"x"});
  EXPECT_EQ(free_vars(mk_forall({"v"}, mk_eq(mk_var("v"), x()))), VarSet{"x"});
  EXPECT_TRUE(free_vars(mk_cmp(CmpOp::Gt, mk_int(3), mk_int(2))).empty());
}

TEST(LogicConstruct, ConstantFolding) {
  EXPECT_EQ(mk_add(mk_int(2), mk_int(3)), mk_int(5));
  EXPECT_TRUE(mk_cmp(CmpOp::Gt, mk_int(3), mk_int(2)).is_true());
  EXPECT_TRUE(mk_and({mk_true(), mk_true()}).is_true());
  EXPECT_TRUE(mk_or({}).is_false());
  EXPECT_TRUE(mk_and(mk_false(), mk_eq(x(), y())).is_false());
}

TEST(LogicConstruct, DuplicateBinderRejected) {
  EXPECT_THROW(mk_forall({"v", "v"}, mk_true()), std::invalid_argument);
}

TEST(LogicProperty, SubstitutionLemma) {
  auto rep = hftest::substitution_lemma(20240517, 1000);
  EXPECT_TRUE(rep.ok()) << rep.summary();
  EXPECT_EQ(rep.cases, 1000u);
}
