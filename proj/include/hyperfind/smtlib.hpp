#pragma once

// SMT-LIB v2 text for terms and formulas. See docs/smt-wire-format.md.

#include <string>
#include <vector>

#include "hyperfind/logic.hpp"

namespace hyperfind::smtlib {

/// The symbol as written on the wire: bare when it is a simple symbol that
/// is not reserved, otherwise wrapped in |...|. Names containing '|' or '\'
/// cannot be represented and are rejected with std::invalid_argument.
std::string symbol(const std::string &name);

std::string to_smt(const logic::Term &t);
std::string to_smt(const logic::Formula &f);

/// `(declare-const name Int)`
std::string declare(const std::string &name);

/// Complete standalone script: set-logic, declarations for `free`,
/// the assertion, check-sat and (if `free` is nonempty) get-value.
std::string script(const std::string &logic, const logic::VarSet &free, const logic::Formula &f);

/// Minimal s-expression used for solver responses.
struct SExpr {
  std::string atom;           // empty for lists
  std::vector<SExpr> items;   // list elements
  bool is_list = false;
};

/// Parses one s-expression; throws std::runtime_error on malformed input.
SExpr parse_sexpr(const std::string &text);

/// Decimal integer or `(- n)`.
logic::Value parse_value(const SExpr &e);

}  // namespace hyperfind::smtlib
