#include "hyperfind/logic.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace hyperfind::logic {

struct TermNode {
  TermKind kind;
  Value value;
  std::string name;
  std::vector<Term> args;
};

struct FormulaNode {
  FormulaKind kind;
  CmpOp op;
  Term lhs;
  Term rhs;
  std::vector<Formula> args;
  std::vector<std::string> bound;
};

Term make_term(TermKind kind, Value value, std::string name, std::vector<Term> args) {
  return Term(std::make_shared<const TermNode>(
      TermNode{kind, value, std::move(name), std::move(args)}));
}

Formula make_formula(FormulaKind kind, CmpOp op, Term lhs, Term rhs, std::vector<Formula> args,
                     std::vector<std::string> bound) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{
      kind, op, std::move(lhs), std::move(rhs), std::move(args), std::move(bound)}));
}

namespace {

const Term &zero_term() {
  static const Term t = make_term(TermKind::Literal, 0, {}, {});
  return t;
}

const Formula &true_formula() {
  static const Formula f = make_formula(FormulaKind::True, CmpOp::Eq, zero_term(), zero_term(), {}, {});
  return f;
}

const Formula &false_formula() {
  static const Formula f = make_formula(FormulaKind::False, CmpOp::Eq, zero_term(), zero_term(), {}, {});
  return f;
}

Value checked_add(Value a, Value b) {
  Value r;
  if (__builtin_add_overflow(a, b, &r)) throw EvalError("integer overflow in addition");
  return r;
}

Value checked_sub(Value a, Value b) {
  Value r;
  if (__builtin_sub_overflow(a, b, &r)) throw EvalError("integer overflow in subtraction");
  return r;
}

Value checked_mul(Value a, Value b) {
  Value r;
  if (__builtin_mul_overflow(a, b, &r)) throw EvalError("integer overflow in multiplication");
  return r;
}

}  // namespace

// ---------------------------------------------------------------- arithmetic

Value euclid_div(Value a, Value b) {
  if (b == 0) throw EvalError("division by zero");
  Value q = a / b;
  Value r = a % b;
  if (r < 0) q = b > 0 ? q - 1 : q + 1;
  return q;
}

Value euclid_mod(Value a, Value b) {
  if (b == 0) throw EvalError("division by zero");
  Value r = a % b;
  if (r < 0) r += b > 0 ? b : -b;
  return r;
}

bool compare(CmpOp op, Value a, Value b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  return op;
}

// ---------------------------------------------------------------- Term

Term::Term() : node_(zero_term().node_) {}

TermKind Term::kind() const { return node_->kind; }
Value Term::value() const { return node_->value; }
const std::string &Term::name() const { return node_->name; }
const std::vector<Term> &Term::args() const { return node_->args; }

bool Term::operator==(const Term &other) const {
  if (node_ == other.node_) return true;
  const TermNode &a = *node_;
  const TermNode &b = *other.node_;
  return a.kind == b.kind && a.value == b.value && a.name == b.name && a.args == b.args;
}

Term mk_int(Value v) { return make_term(TermKind::Literal, v, {}, {}); }

Term mk_var(std::string name) { return make_term(TermKind::Var, 0, std::move(name), {}); }

Term mk_add(Term a, Term b) {
  if (a.is_literal() && b.is_literal()) return mk_int(checked_add(a.value(), b.value()));
  if (b.is_literal() && b.value() == 0) return a;
  if (a.is_literal() && a.value() == 0) return b;
  return make_term(TermKind::Add, 0, {}, {std::move(a), std::move(b)});
}

Term mk_sub(Term a, Term b) {
  if (a.is_literal() && b.is_literal()) return mk_int(checked_sub(a.value(), b.value()));
  if (b.is_literal() && b.value() == 0) return a;
  return make_term(TermKind::Sub, 0, {}, {std::move(a), std::move(b)});
}

Term mk_neg(Term a) {
  if (a.is_literal()) return mk_int(checked_sub(0, a.value()));
  return make_term(TermKind::Neg, 0, {}, {std::move(a)});
}

Term mk_mul(Term a, Term b) {
  if (a.is_literal() && b.is_literal()) return mk_int(checked_mul(a.value(), b.value()));
  if (!a.is_literal() && !b.is_literal())
    throw NonlinearError("nonlinear multiplication: " + to_string(a) + " * " + to_string(b));
  if (!a.is_literal()) std::swap(a, b);
  Value c = a.value();
  if (c == 0) return mk_int(0);
  if (c == 1) return b;
  return make_term(TermKind::Mul, c, {}, {std::move(b)});
}

Term mk_div(Term a, Value divisor) {
  if (divisor == 0) throw NonlinearError("division by literal zero");
  if (a.is_literal()) return mk_int(euclid_div(a.value(), divisor));
  return make_term(TermKind::Div, divisor, {}, {std::move(a)});
}

Term mk_mod(Term a, Value divisor) {
  if (divisor == 0) throw NonlinearError("modulo by literal zero");
  if (a.is_literal()) return mk_int(euclid_mod(a.value(), divisor));
  return make_term(TermKind::Mod, divisor, {}, {std::move(a)});
}

// ---------------------------------------------------------------- Formula

Formula::Formula() : node_(true_formula().node_) {}

FormulaKind Formula::kind() const { return node_->kind; }
CmpOp Formula::op() const { return node_->op; }
const Term &Formula::lhs() const { return node_->lhs; }
const Term &Formula::rhs() const { return node_->rhs; }
const std::vector<Formula> &Formula::args() const { return node_->args; }
const std::vector<std::string> &Formula::bound() const { return node_->bound; }

bool Formula::quantifier_free() const {
  if (is_quantifier()) return false;
  return std::all_of(args().begin(), args().end(),
                     [](const Formula &f) { return f.quantifier_free(); });
}

bool Formula::operator==(const Formula &other) const {
  if (node_ == other.node_) return true;
  const FormulaNode &a = *node_;
  const FormulaNode &b = *other.node_;
  if (a.kind != b.kind) return false;
  if (a.kind == FormulaKind::Cmp) return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
  return a.bound == b.bound && a.args == b.args;
}

Formula mk_true() { return true_formula(); }
Formula mk_false() { return false_formula(); }
Formula mk_bool(bool b) { return b ? mk_true() : mk_false(); }

Formula mk_cmp(CmpOp op, Term a, Term b) {
  if (a.is_literal() && b.is_literal()) return mk_bool(compare(op, a.value(), b.value()));
  return make_formula(FormulaKind::Cmp, op, std::move(a), std::move(b), {}, {});
}

Formula mk_eq(Term a, Term b) { return mk_cmp(CmpOp::Eq, std::move(a), std::move(b)); }

Formula mk_not(Formula f) {
  if (f.is_true()) return mk_false();
  if (f.is_false()) return mk_true();
  if (f.kind() == FormulaKind::Not) return f.args().front();
  return make_formula(FormulaKind::Not, CmpOp::Eq, zero_term(), zero_term(), {std::move(f)}, {});
}

Formula mk_and(std::vector<Formula> fs) {
  std::vector<Formula> kept;
  kept.reserve(fs.size());
  for (auto &f : fs) {
    if (f.is_false()) return mk_false();
    if (f.is_true()) continue;
    if (f.kind() == FormulaKind::And) {
      kept.insert(kept.end(), f.args().begin(), f.args().end());
    } else {
      kept.push_back(std::move(f));
    }
  }
  if (kept.empty()) return mk_true();
  if (kept.size() == 1) return kept.front();
  return make_formula(FormulaKind::And, CmpOp::Eq, zero_term(), zero_term(), std::move(kept), {});
}

Formula mk_and(Formula a, Formula b) { return mk_and(std::vector<Formula>{std::move(a), std::move(b)}); }

Formula mk_or(std::vector<Formula> fs) {
  std::vector<Formula> kept;
  kept.reserve(fs.size());
  for (auto &f : fs) {
    if (f.is_true()) return mk_true();
    if (f.is_false()) continue;
    if (f.kind() == FormulaKind::Or) {
      kept.insert(kept.end(), f.args().begin(), f.args().end());
    } else {
      kept.push_back(std::move(f));
    }
  }
  if (kept.empty()) return mk_false();
  if (kept.size() == 1) return kept.front();
  return make_formula(FormulaKind::Or, CmpOp::Eq, zero_term(), zero_term(), std::move(kept), {});
}

Formula mk_or(Formula a, Formula b) { return mk_or(std::vector<Formula>{std::move(a), std::move(b)}); }

Formula mk_implies(Formula a, Formula b) {
  if (a.is_true()) return b;
  if (a.is_false() || b.is_true()) return mk_true();
  if (b.is_false()) return mk_not(std::move(a));
  return make_formula(FormulaKind::Implies, CmpOp::Eq, zero_term(), zero_term(),
                      {std::move(a), std::move(b)}, {});
}

namespace {

Formula mk_quant(FormulaKind kind, std::vector<std::string> vars, Formula body) {
  {
    std::set<std::string> seen;
    for (const auto &v : vars)
      if (!seen.insert(v).second)
        throw std::invalid_argument("quantifier binds '" + v + "' twice");
  }
  if (body.is_true() || body.is_false()) return body;
  // Drop binders that do not occur in the body.
  VarSet fv = free_vars(body);
  vars.erase(std::remove_if(vars.begin(), vars.end(),
                            [&](const std::string &v) { return fv.count(v) == 0; }),
             vars.end());
  if (vars.empty()) return body;
  return make_formula(kind, CmpOp::Eq, zero_term(), zero_term(), {std::move(body)}, std::move(vars));
}

}  // namespace

Formula mk_forall(std::vector<std::string> vars, Formula body) {
  return mk_quant(FormulaKind::Forall, std::move(vars), std::move(body));
}

Formula mk_exists(std::vector<std::string> vars, Formula body) {
  return mk_quant(FormulaKind::Exists, std::move(vars), std::move(body));
}

// ---------------------------------------------------------------- evaluation

Value eval(const Term &t, const Assignment &rho) {
  switch (t.kind()) {
    case TermKind::Literal: return t.value();
    case TermKind::Var: {
      auto it = rho.find(t.name());
      if (it == rho.end()) throw EvalError("unbound variable '" + t.name() + "'");
      return it->second;
    }
    case TermKind::Add: return checked_add(eval(t.args()[0], rho), eval(t.args()[1], rho));
    case TermKind::Sub: return checked_sub(eval(t.args()[0], rho), eval(t.args()[1], rho));
    case TermKind::Neg: return checked_sub(0, eval(t.args()[0], rho));
    case TermKind::Mul: return checked_mul(t.value(), eval(t.args()[0], rho));
    case TermKind::Div: return euclid_div(eval(t.args()[0], rho), t.value());
    case TermKind::Mod: return euclid_mod(eval(t.args()[0], rho), t.value());
  }
  throw EvalError("malformed term");
}

bool eval(const Formula &f, const Assignment &rho) {
  switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Cmp: return compare(f.op(), eval(f.lhs(), rho), eval(f.rhs(), rho));
    case FormulaKind::Not: return !eval(f.args()[0], rho);
    case FormulaKind::And: {
      // Evaluate every conjunct so that unbound variables are always reported.
      bool result = true;
      for (const auto &g : f.args()) result = eval(g, rho) && result;
      return result;
    }
    case FormulaKind::Or: {
      bool result = false;
      for (const auto &g : f.args()) result = eval(g, rho) || result;
      return result;
    }
    case FormulaKind::Implies: {
      bool a = eval(f.args()[0], rho);
      bool b = eval(f.args()[1], rho);
      return !a || b;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      throw EvalError("unsupported: evaluation of quantified formula " + to_string(f));
  }
  throw EvalError("malformed formula");
}

// ---------------------------------------------------------------- free variables

void collect_free_vars(const Term &t, VarSet &out) {
  if (t.kind() == TermKind::Var) {
    out.insert(t.name());
    return;
  }
  for (const auto &a : t.args()) collect_free_vars(a, out);
}

void collect_free_vars(const Formula &f, VarSet &out) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return;
    case FormulaKind::Cmp:
      collect_free_vars(f.lhs(), out);
      collect_free_vars(f.rhs(), out);
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      VarSet inner;
      collect_free_vars(f.body(), inner);
      for (const auto &b : f.bound()) inner.erase(b);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      for (const auto &g : f.args()) collect_free_vars(g, out);
  }
}

VarSet free_vars(const Term &t) {
  VarSet out;
  collect_free_vars(t, out);
  return out;
}

VarSet free_vars(const Formula &f) {
  VarSet out;
  collect_free_vars(f, out);
  return out;
}

// ---------------------------------------------------------------- substitution

Term substitute(const Term &t, const Substitution &sigma) {
  switch (t.kind()) {
    case TermKind::Literal: return t;
    case TermKind::Var: {
      auto it = sigma.find(t.name());
      return it == sigma.end() ? t : it->second;
    }
    case TermKind::Add: return mk_add(substitute(t.args()[0], sigma), substitute(t.args()[1], sigma));
    case TermKind::Sub: return mk_sub(substitute(t.args()[0], sigma), substitute(t.args()[1], sigma));
    case TermKind::Neg: return mk_neg(substitute(t.args()[0], sigma));
    case TermKind::Mul: return mk_mul(mk_int(t.value()), substitute(t.args()[0], sigma));
    case TermKind::Div: return mk_div(substitute(t.args()[0], sigma), t.value());
    case TermKind::Mod: return mk_mod(substitute(t.args()[0], sigma), t.value());
  }
  return t;
}

namespace {

Formula substitute_quantifier(const Formula &f, const Substitution &sigma) {
  VarSet body_fv = free_vars(f.body());
  Substitution inner;
  VarSet inserted;  // free variables of the terms that will actually be inserted
  for (const auto &[x, term] : sigma) {
    if (std::find(f.bound().begin(), f.bound().end(), x) != f.bound().end()) continue;
    if (!body_fv.count(x)) continue;
    inner.emplace(x, term);
    collect_free_vars(term, inserted);
  }
  if (inner.empty()) return f;

  VarSet taken = inserted;
  taken.insert(body_fv.begin(), body_fv.end());
  taken.insert(f.bound().begin(), f.bound().end());

  std::vector<std::string> bound;
  bound.reserve(f.bound().size());
  for (const auto &b : f.bound()) {
    if (!inserted.count(b)) {
      bound.push_back(b);
      continue;
    }
    std::string renamed = b + "'";
    while (taken.count(renamed)) renamed += "'";
    taken.insert(renamed);
    inner[b] = mk_var(renamed);
    bound.push_back(renamed);
  }
  Formula body = substitute(f.body(), inner);
  return f.kind() == FormulaKind::Forall ? mk_forall(std::move(bound), std::move(body))
                                         : mk_exists(std::move(bound), std::move(body));
}

}  // namespace

Formula substitute(const Formula &f, const Substitution &sigma) {
  if (sigma.empty()) return f;
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return f;
    case FormulaKind::Cmp:
      return mk_cmp(f.op(), substitute(f.lhs(), sigma), substitute(f.rhs(), sigma));
    case FormulaKind::Not: return mk_not(substitute(f.args()[0], sigma));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> args;
      args.reserve(f.args().size());
      for (const auto &g : f.args()) args.push_back(substitute(g, sigma));
      return f.kind() == FormulaKind::And ? mk_and(std::move(args)) : mk_or(std::move(args));
    }
    case FormulaKind::Implies:
      return mk_implies(substitute(f.args()[0], sigma), substitute(f.args()[1], sigma));
    case FormulaKind::Forall:
    case FormulaKind::Exists: return substitute_quantifier(f, sigma);
  }
  return f;
}

// ---------------------------------------------------------------- printing

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

namespace {

void print(std::ostream &os, const Term &t, bool nested) {
  switch (t.kind()) {
    case TermKind::Literal: os << t.value(); return;
    case TermKind::Var: os << t.name(); return;
    case TermKind::Neg: os << "-"; print(os, t.args()[0], true); return;
    default: break;
  }
  if (nested) os << "(";
  switch (t.kind()) {
    case TermKind::Add: print(os, t.args()[0], true); os << " + "; print(os, t.args()[1], true); break;
    case TermKind::Sub: print(os, t.args()[0], true); os << " - "; print(os, t.args()[1], true); break;
    case TermKind::Mul: os << t.value() << " * "; print(os, t.args()[0], true); break;
    case TermKind::Div: print(os, t.args()[0], true); os << " / " << t.value(); break;
    case TermKind::Mod: print(os, t.args()[0], true); os << " % " << t.value(); break;
    default: break;
  }
  if (nested) os << ")";
}

void print(std::ostream &os, const Formula &f) {
  auto join = [&](const char *sep) {
    os << "(";
    for (std::size_t i = 0; i < f.args().size(); ++i) {
      if (i) os << sep;
      print(os, f.args()[i]);
    }
    os << ")";
  };
  switch (f.kind()) {
    case FormulaKind::True: os << "true"; break;
    case FormulaKind::False: os << "false"; break;
    case FormulaKind::Cmp:
      print(os, f.lhs(), true);
      os << " " << to_string(f.op()) << " ";
      print(os, f.rhs(), true);
      break;
    case FormulaKind::Not: os << "!("; print(os, f.args()[0]); os << ")"; break;
    case FormulaKind::And: join(" && "); break;
    case FormulaKind::Or: join(" || "); break;
    case FormulaKind::Implies: join(" -> "); break;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      os << (f.kind() == FormulaKind::Forall ? "forall " : "exists ");
      for (std::size_t i = 0; i < f.bound().size(); ++i) os << (i ? ", " : "") << f.bound()[i];
      os << ". (";
      print(os, f.body());
      os << ")";
      break;
    }
  }
}

}  // namespace

std::string to_string(const Term &t) {
  std::ostringstream os;
  print(os, t, false);
  return os.str();
}

std::string to_string(const Formula &f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

std::ostream &operator<<(std::ostream &os, const Term &t) { return os << to_string(t); }
std::ostream &operator<<(std::ostream &os, const Formula &f) { return os << to_string(f); }

}  // namespace hyperfind::logic
