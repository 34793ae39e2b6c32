#pragma once

// First-order terms and formulas over linear integer arithmetic.
//
// Terms and formulas are immutable trees with shared structure; copying a
// Term or Formula is a reference-count bump. Smart constructors (mk_*) do
// constant folding only, they never reorder or normalize operands.

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperfind::logic {

enum class Sort { Int };

using Value = std::int64_t;
using VarSet = std::set<std::string>;

/// Raised by evaluation when an assignment is not total on the input, when
/// a quantified formula is evaluated, or on arithmetic overflow.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a term would leave linear arithmetic (non-literal product,
/// division by a non-literal or by zero).
class NonlinearError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TermKind { Literal, Var, Add, Sub, Neg, Mul, Div, Mod };

class Term;
struct TermNode;

class Term {
 public:
  Term();  // literal 0

  TermKind kind() const;
  /// Literal value, or the literal factor/divisor of Mul/Div/Mod.
  Value value() const;
  const std::string &name() const;  // Var only
  Sort sort() const { return Sort::Int; }
  const std::vector<Term> &args() const;

  bool is_literal() const { return kind() == TermKind::Literal; }
  bool operator==(const Term &other) const;
  bool operator!=(const Term &other) const { return !(*this == other); }

 private:
  friend Term make_term(TermKind, Value, std::string, std::vector<Term>);
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

Term mk_int(Value v);
Term mk_var(std::string name);
Term mk_add(Term a, Term b);
Term mk_sub(Term a, Term b);
Term mk_neg(Term a);
/// Multiplication; one side must fold to a literal.
Term mk_mul(Term a, Term b);
/// Euclidean division and remainder by a nonzero literal (SMT-LIB div/mod).
Term mk_div(Term a, Value divisor);
Term mk_mod(Term a, Value divisor);

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class FormulaKind { True, False, Cmp, Not, And, Or, Implies, Forall, Exists };

struct FormulaNode;

class Formula {
 public:
  Formula();  // true

  FormulaKind kind() const;
  CmpOp op() const;                          // Cmp only
  const Term &lhs() const;                   // Cmp only
  const Term &rhs() const;                   // Cmp only
  const std::vector<Formula> &args() const;  // Not/And/Or/Implies/quantifiers (body = args()[0])
  const std::vector<std::string> &bound() const;  // quantifiers only
  const Formula &body() const { return args().front(); }

  bool is_true() const { return kind() == FormulaKind::True; }
  bool is_false() const { return kind() == FormulaKind::False; }
  bool is_quantifier() const {
    return kind() == FormulaKind::Forall || kind() == FormulaKind::Exists;
  }
  bool quantifier_free() const;

  bool operator==(const Formula &other) const;
  bool operator!=(const Formula &other) const { return !(*this == other); }

 private:
  friend Formula make_formula(FormulaKind, CmpOp, Term, Term, std::vector<Formula>,
                              std::vector<std::string>);
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const FormulaNode> node_;
};

Formula mk_true();
Formula mk_false();
Formula mk_bool(bool b);
Formula mk_cmp(CmpOp op, Term a, Term b);
Formula mk_eq(Term a, Term b);
Formula mk_not(Formula f);
Formula mk_and(std::vector<Formula> fs);
Formula mk_and(Formula a, Formula b);
Formula mk_or(std::vector<Formula> fs);
Formula mk_or(Formula a, Formula b);
Formula mk_implies(Formula a, Formula b);
/// Quantifier block; an empty variable list returns the body unchanged.
/// Throws std::invalid_argument when the bound variables are not distinct.
Formula mk_forall(std::vector<std::string> vars, Formula body);
Formula mk_exists(std::vector<std::string> vars, Formula body);

using Assignment = std::map<std::string, Value>;
using Substitution = std::map<std::string, Term>;

Value eval(const Term &t, const Assignment &rho);
bool eval(const Formula &f, const Assignment &rho);

Term substitute(const Term &t, const Substitution &sigma);
/// Simultaneous, capture-avoiding substitution. Bound variables that would
/// capture a variable of an inserted term are renamed with a prime suffix.
Formula substitute(const Formula &f, const Substitution &sigma);

VarSet free_vars(const Term &t);
VarSet free_vars(const Formula &f);
void collect_free_vars(const Term &t, VarSet &out);
void collect_free_vars(const Formula &f, VarSet &out);

std::string to_string(const Term &t);
std::string to_string(const Formula &f);
std::string to_string(CmpOp op);
std::ostream &operator<<(std::ostream &os, const Term &t);
std::ostream &operator<<(std::ostream &os, const Formula &f);

/// Integer arithmetic shared with the solver's semantics (Euclidean div/mod).
Value euclid_div(Value a, Value b);
Value euclid_mod(Value a, Value b);
bool compare(CmpOp op, Value a, Value b);
CmpOp negate(CmpOp op);

}  // namespace hyperfind::logic
