#include "hyperfind/smtlib.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hyperfind::smtlib {

using logic::CmpOp;
using logic::Formula;
using logic::FormulaKind;
using logic::Term;
using logic::TermKind;

namespace {

bool simple_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("~!@$%^&*_-+=<>.?/").find(c) !=
                                                            std::string_view::npos;
}

const std::set<std::string> &reserved() {
  static const std::set<std::string> r = {"!",      "_",       "as",     "BINARY", "DECIMAL", "exists", "HEXADECIMAL",
                                          "forall", "let",     "match",  "NUMERAL", "par",   "STRING", "true",
                                          "false",  "not",     "and",    "or",     "=>",      "distinct", "ite",
                                          "div",    "mod",     "abs",    "Int",    "Bool"};
  return r;
}

std::string literal(logic::Value v) {
  if (v >= 0) return std::to_string(v);
  // -(-2^63) overflows; print the magnitude from the unsigned value.
  auto mag = static_cast<unsigned long long>(-(v + 1)) + 1ULL;
  return "(- " + std::to_string(mag) + ")";
}

void write(std::ostream &os, const Term &t) {
  switch (t.kind()) {
    case TermKind::Literal: os << literal(t.value()); break;
    case TermKind::Var: os << symbol(t.name()); break;
    case TermKind::Add:
    case TermKind::Sub:
      os << (t.kind() == TermKind::Add ? "(+ " : "(- ");
      write(os, t.args()[0]);
      os << " ";
      write(os, t.args()[1]);
      os << ")";
      break;
    case TermKind::Neg:
      os << "(- ";
      write(os, t.args()[0]);
      os << ")";
      break;
    case TermKind::Mul:
      os << "(* " << literal(t.value()) << " ";
      write(os, t.args()[0]);
      os << ")";
      break;
    case TermKind::Div:
    case TermKind::Mod:
      os << (t.kind() == TermKind::Div ? "(div " : "(mod ");
      write(os, t.args()[0]);
      os << " " << literal(t.value()) << ")";
      break;
  }
}

const char *cmp_op(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "distinct";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "=";
}

void write(std::ostream &os, const Formula &f) {
  switch (f.kind()) {
    case FormulaKind::True: os << "true"; break;
    case FormulaKind::False: os << "false"; break;
    case FormulaKind::Cmp:
      os << "(" << cmp_op(f.op()) << " ";
      write(os, f.lhs());
      os << " ";
      write(os, f.rhs());
      os << ")";
      break;
    case FormulaKind::Not:
      os << "(not ";
      write(os, f.args()[0]);
      os << ")";
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      os << (f.kind() == FormulaKind::And ? "(and" : f.kind() == FormulaKind::Or ? "(or" : "(=>");
      for (const Formula &a : f.args()) {
        os << " ";
        write(os, a);
      }
      os << ")";
      break;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      os << (f.kind() == FormulaKind::Forall ? "(forall (" : "(exists (");
      for (std::size_t i = 0; i < f.bound().size(); ++i)
        os << (i ? " " : "") << "(" << symbol(f.bound()[i]) << " Int)";
      os << ") ";
      write(os, f.body());
      os << ")";
      break;
  }
}

}  // namespace

std::string symbol(const std::string &name) {
  if (name.empty()) throw std::invalid_argument("empty SMT symbol");
  if (name.find_first_of("|\\") != std::string::npos)
    throw std::invalid_argument("symbol '" + name + "' cannot be quoted");
  bool simple = !std::isdigit(static_cast<unsigned char>(name[0])) && !reserved().count(name);
  for (char c : name) simple = simple && simple_char(c);
  return simple ? name : "|" + name + "|";
}

std::string to_smt(const Term &t) {
  std::ostringstream os;
  write(os, t);
  return os.str();
}

std::string to_smt(const Formula &f) {
  std::ostringstream os;
  write(os, f);
  return os.str();
}

std::string declare(const std::string &name) { return "(declare-const " + symbol(name) + " Int)"; }

std::string script(const std::string &logic, const logic::VarSet &free, const Formula &f) {
  std::ostringstream os;
  os << "(set-logic " << logic << ")\n";
  for (const auto &v : free) os << declare(v) << "\n";
  os << "(assert " << to_smt(f) << ")\n(check-sat)\n";
  if (!free.empty()) {
    os << "(get-value (";
    bool first = true;
    for (const auto &v : free) {
      os << (first ? "" : " ") << symbol(v);
      first = false;
    }
    os << "))\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- reader

namespace {

class Reader {
 public:
  explicit Reader(const std::string &s) : s_(s) {}

  SExpr read() {
    skip_ws();
    if (i_ >= s_.size()) throw std::runtime_error("unexpected end of s-expression");
    SExpr e;
    if (s_[i_] == '(') {
      ++i_;
      e.is_list = true;
      for (;;) {
        skip_ws();
        if (i_ >= s_.size()) throw std::runtime_error("unbalanced s-expression");
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        e.items.push_back(read());
      }
    } else if (s_[i_] == ')') {
      throw std::runtime_error("unexpected ')'");
    } else if (s_[i_] == '|') {
      std::size_t end = s_.find('|', i_ + 1);
      if (end == std::string::npos) throw std::runtime_error("unterminated quoted symbol");
      e.atom = s_.substr(i_ + 1, end - i_ - 1);
      i_ = end + 1;
    } else if (s_[i_] == '"') {
      std::size_t j = i_ + 1;
      while (j < s_.size() && !(s_[j] == '"' && (j + 1 >= s_.size() || s_[j + 1] != '"'))) j += s_[j] == '"' ? 2 : 1;
      if (j >= s_.size()) throw std::runtime_error("unterminated string literal");
      e.atom = s_.substr(i_, j - i_ + 1);
      i_ = j + 1;
    } else {
      std::size_t j = i_;
      while (j < s_.size() && !std::isspace(static_cast<unsigned char>(s_[j])) && s_[j] != '(' && s_[j] != ')') ++j;
      e.atom = s_.substr(i_, j - i_);
      i_ = j;
    }
    return e;
  }

  bool done() {
    skip_ws();
    return i_ >= s_.size();
  }

 private:
  void skip_ws() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }
  const std::string &s_;
  std::size_t i_ = 0;
};

}  // namespace

SExpr parse_sexpr(const std::string &text) {
  Reader r(text);
  SExpr e = r.read();
  if (!r.done()) throw std::runtime_error("trailing input after s-expression");
  return e;
}

logic::Value parse_value(const SExpr &e) {
  auto parse_nat = [](const std::string &a) -> logic::Value {
    if (a.empty() || a.find_first_not_of("0123456789") != std::string::npos)
      throw std::runtime_error("expected integer value, got '" + a + "'");
    return std::stoll(a);
  };
  if (!e.is_list) return parse_nat(e.atom);
  if (e.items.size() == 2 && !e.items[0].is_list && e.items[0].atom == "-") return -parse_value(e.items[1]);
  throw std::runtime_error("expected integer value");
}

}  // namespace hyperfind::smtlib
