#include <gtest/gtest.h>

#include <random>

#include "hyperfind/smtlib.hpp"
#include "smt_reader.hpp"

using namespace hyperfind;
using namespace hyperfind::logic;
using smtlib::to_smt;

TEST(SmtSymbol, SimpleSymbolsStayBare) {
  EXPECT_EQ(smtlib::symbol("v0"), "v0");
  EXPECT_EQ(smtlib::symbol("p1.countA"), "p1.countA");
}

TEST(SmtSymbol, ReservedAndOddNamesAreQuoted) {
  EXPECT_EQ(smtlib::symbol("and"), "|and|");
  EXPECT_EQ(smtlib::symbol("p1*p2.x"), "p1*p2.x");
  EXPECT_EQ(smtlib::symbol("a b"), "|a b|");
  EXPECT_EQ(smtlib::symbol("1x"), "|1x|");
  EXPECT_THROW(smtlib::symbol("a|b"), std::invalid_argument);
  EXPECT_THROW(smtlib::symbol(""), std::invalid_argument);
}

TEST(SmtWrite, Terms) {
  EXPECT_EQ(to_smt(mk_int(-3)), "(- 3)");
  EXPECT_EQ(to_smt(mk_add(mk_var("x"), mk_int(1))), "(+ x 1)");
  EXPECT_EQ(to_smt(mk_mul(mk_int(2), mk_var("x"))), "(* 2 x)");
  EXPECT_EQ(to_smt(mk_mod(mk_var("x"), 2)), "(mod x 2)");
  EXPECT_EQ(to_smt(mk_neg(mk_var("x"))), "(- x)");
}

TEST(SmtWrite, Formulas) {
  EXPECT_EQ(to_smt(mk_cmp(CmpOp::Ne, mk_var("x"), mk_int(0))), "(distinct x 0)");
  EXPECT_EQ(to_smt(mk_forall({"v1"}, mk_not(mk_eq(mk_var("v1"), mk_var("v0"))))),
            "(forall ((v1 Int)) (not (= v1 v0)))");
  EXPECT_EQ(to_smt(mk_true()), "true");
}

TEST(SmtWrite, Script) {
  std::string s = smtlib::script("LIA", {"v0"}, mk_cmp(CmpOp::Gt, mk_var("v0"), mk_int(0)));
  EXPECT_EQ(s, "(set-logic LIA)\n(declare-const v0 Int)\n(assert (> v0 0))\n(check-sat)\n(get-value (v0))\n");
}

TEST(SmtRead, Values) {
  EXPECT_EQ(smtlib::parse_value(smtlib::parse_sexpr("42")), 42);
  EXPECT_EQ(smtlib::parse_value(smtlib::parse_sexpr("(- 7)")), -7);
  EXPECT_THROW(smtlib::parse_sexpr("(a b"), std::runtime_error);
}

TEST(SmtRead, ModelResponse) {
  auto e = smtlib::parse_sexpr("((v0 1) (|p1.x| (- 2)))");
  ASSERT_TRUE(e.is_list);
  ASSERT_EQ(e.items.size(), 2u);
  EXPECT_EQ(e.items[1].items[0].atom, "p1.x");
  EXPECT_EQ(smtlib::parse_value(e.items[1].items[1]), -2);
}

// ---------------------------------------------------------------------------
// Round trip against the independent reader.

namespace {

class RandomFormulas {
 public:
  explicit RandomFormulas(unsigned seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string var() {
    static const char *names[] = {"v0", "v1", "p1.x", "p2.countA", "p1*p2.y", "and", "x y"};
    return names[pick(0, 6)];
  }

  Term term(int depth) {
    if (depth == 0 || pick(0, 3) == 0) return pick(0, 1) ? mk_var(var()) : mk_int(pick(-20, 20));
    switch (pick(0, 5)) {
      case 0: return mk_add(term(depth - 1), term(depth - 1));
      case 1: return mk_sub(term(depth - 1), term(depth - 1));
      case 2: return mk_neg(term(depth - 1));
      case 3: return mk_mul(mk_int(pick(-5, 5)), term(depth - 1));
      case 4: return mk_div(term(depth - 1), pick(1, 4));
      default: return mk_mod(term(depth - 1), -pick(1, 4));
    }
  }

  Formula formula(int depth) {
    if (depth == 0 || pick(0, 3) == 0) {
      switch (pick(0, 7)) {
        case 0: return mk_true();
        case 1: return mk_false();
        default: {
          static const CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
          return mk_cmp(ops[pick(0, 5)], term(2), term(2));
        }
      }
    }
    switch (pick(0, 5)) {
      case 0: return mk_not(formula(depth - 1));
      case 1: return mk_and({formula(depth - 1), formula(depth - 1), formula(depth - 1)});
      case 2: return mk_or(formula(depth - 1), formula(depth - 1));
      case 3: return mk_implies(formula(depth - 1), formula(depth - 1));
      case 4: return mk_forall({"v0", "v1"}, formula(depth - 1));
      default: return mk_exists({"p1.x"}, formula(depth - 1));
    }
  }

 private:
  std::mt19937 rng_;
};

}  // namespace

TEST(SmtRoundTrip, ReferenceReaderReproducesTree) {
  RandomFormulas gen(7);
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(4);
    std::string text = to_smt(f);
    Formula back = hftest::read_smt_formula(text);
    ASSERT_EQ(back, f) << text;
  }
}

TEST(SmtRoundTrip, ExtremeLiterals) {
  for (Value v : {std::numeric_limits<Value>::min(), std::numeric_limits<Value>::max(), Value{0}, Value{-1}})
    EXPECT_EQ(hftest::read_smt_term(to_smt(mk_int(v))), mk_int(v));
}
