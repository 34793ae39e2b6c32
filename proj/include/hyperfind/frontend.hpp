#pragma once

// Surface language: program definitions followed by one specification.
// See docs/input-format.md for the grammar.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hyperfind/graph.hpp"
#include "hyperfind/logic.hpp"
#include "hyperfind/spec.hpp"

namespace hyperfind::frontend {

struct SourcePos {
  int line = 1;
  int column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string &message);
  SourcePos pos() const { return pos_; }
  const std::string &detail() const { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
};

struct Stmt;
using StmtList = std::vector<Stmt>;

struct AssignStmt {
  std::string target;
  logic::Term expr;
};
struct HavocStmt {
  std::string target;
};
struct IfStmt {
  logic::Formula cond;
  StmtList then_branch;
  StmtList else_branch;
};
struct WhileStmt {
  logic::Formula cond;
  StmtList body;
};
struct LoopStmt {
  StmtList body;
};
struct EitherStmt {
  std::vector<StmtList> branches;
};
struct ObserveStmt {
  std::string label;  // empty when unlabeled
};
struct SkipStmt {};

struct Stmt {
  std::variant<AssignStmt, HavocStmt, IfStmt, WhileStmt, LoopStmt, EitherStmt, ObserveStmt, SkipStmt> node;
  SourcePos pos;
};

struct ProgramAst {
  std::string name;
  StmtList body;
  SourcePos pos;
  std::vector<std::string> variables;  // every variable the program mentions, sorted
};

struct QuantifierAst {
  QuantKind kind = QuantKind::Forall;
  std::string trace;
  std::string program;
  /// Selected observation labels; nullopt selects every observe statement.
  std::optional<std::vector<std::string>> labels;
  SourcePos pos;
};

struct SpecAst {
  std::vector<QuantifierAst> quantifiers;
  /// Variables are named `trace.var` (written `var@trace` in source).
  logic::Formula body;
};

struct SourceFile {
  std::vector<ProgramAst> programs;
  SpecAst spec;
};

/// Parses and checks a complete input file: syntax, linearity, program
/// and label references, body variables, and the forall+ exists* prefix.
SourceFile parse(std::string_view text);

/// Parses a single statement list (without `prog` wrapper); used by tests.
StmtList parse_statements(std::string_view text);

struct LoweredProgram {
  graph::ProgramGraph graph;
  /// Observation label -> observed locations, in source order.
  std::map<std::string, std::vector<graph::Location>> labels;
  /// One location per reachable observe statement, in source order.
  std::vector<graph::Location> observe_points;
};

LoweredProgram lower(const ProgramAst &ast);

struct Problem {
  std::map<std::string, LoweredProgram> programs;
  HyperSpec spec;
};

/// parse + lower + bind every quantifier to a prefixed copy of its program.
Problem load(std::string_view text);
Problem load_file(const std::string &path);

}  // namespace hyperfind::frontend
