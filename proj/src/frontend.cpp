#include "hyperfind/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace hyperfind::frontend {

using logic::CmpOp;
using logic::Formula;
using logic::Term;

ParseError::ParseError(SourcePos pos, const std::string &message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
      pos_(pos),
      detail_(message) {}

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  logic::Value value = 0;
  SourcePos pos;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  SourcePos pos;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n && i < src.size(); ++j, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  static const char *const two_char[] = {":=", "==", "!=", "<=", ">=", "&&", "||", "->"};
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      SourcePos start = pos;
      advance(2);
      while (i < src.size() && src.substr(i, 2) != "*/") advance(1);
      if (i >= src.size()) throw ParseError(start, "unterminated comment");
      advance(2);
      continue;
    }
    Token t;
    t.pos = pos;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      try {
        t.value = std::stoll(t.text);
      } catch (const std::out_of_range &) {
        throw ParseError(pos, "integer literal out of range: " + t.text);
      }
      advance(j - i);
    } else {
      t.kind = Tok::Punct;
      for (const char *op : two_char)
        if (src.substr(i, 2) == op) t.text = op;
      if (t.text.empty()) {
        if (std::string_view("{}();,.@+-*/%<>!").find(c) == std::string_view::npos)
          throw ParseError(pos, std::string("unexpected character '") + c + "'");
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = pos;
  out.push_back(end);
  return out;
}

const std::set<std::string> &keywords() {
  static const std::set<std::string> k = {"prog",  "if",     "else", "while", "loop",   "either",
                                          "or",    "observe", "skip", "havoc", "input",  "forall",
                                          "exists", "in",    "obs",  "always", "true",   "false"};
  return k;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  SourceFile file() {
    SourceFile f;
    while (is_word("prog")) f.programs.push_back(program());
    if (at_end()) throw ParseError(peek().pos, "no specification");
    if (!is_word("forall") && !is_word("exists"))
      throw ParseError(peek().pos, "expected 'prog' or a quantifier, found " + describe(peek()));
    f.spec = spec();
    if (!at_end()) throw ParseError(peek().pos, "unexpected " + describe(peek()) + " after specification");
    return f;
  }

  StmtList statements_only() {
    StmtList s;
    while (!at_end()) s.push_back(statement());
    return s;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  bool in_spec_ = false;

  const Token &peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_punct(const char *p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool is_word(const char *w) const { return peek().kind == Tok::Ident && peek().text == w; }
  static std::string describe(const Token &t) {
    return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  }
  const Token &next() {
    const Token &t = peek();
    if (i_ < toks_.size() - 1) ++i_;
    return t;
  }
  void expect(const char *p) {
    if (!is_punct(p)) throw ParseError(peek().pos, std::string("expected '") + p + "', found " + describe(peek()));
    next();
  }
  void expect_word(const char *w) {
    if (!is_word(w)) throw ParseError(peek().pos, std::string("expected '") + w + "', found " + describe(peek()));
    next();
  }
  std::string ident(const char *what) {
    const Token &t = peek();
    if (t.kind != Tok::Ident || keywords().count(t.text))
      throw ParseError(t.pos, std::string("expected ") + what + ", found " + describe(t));
    next();
    return t.text;
  }

  ProgramAst program() {
    ProgramAst p;
    p.pos = peek().pos;
    expect_word("prog");
    p.name = ident("program name");
    p.body = block();
    return p;
  }

  StmtList block() {
    expect("{");
    StmtList out;
    while (!is_punct("}")) {
      if (at_end()) throw ParseError(peek().pos, "expected '}', found end of input");
      out.push_back(statement());
    }
    next();
    return out;
  }

  Stmt statement() {
    Stmt s;
    s.pos = peek().pos;
    if (is_word("skip")) {
      next();
      s.node = SkipStmt{};
      expect(";");
    } else if (is_word("havoc") || is_word("input")) {
      next();
      s.node = HavocStmt{ident("variable")};
      expect(";");
    } else if (is_word("observe")) {
      next();
      ObserveStmt o;
      if (!is_punct(";")) o.label = ident("observation label");
      s.node = o;
      expect(";");
    } else if (is_word("if")) {
      s.node = if_statement();
    } else if (is_word("while")) {
      next();
      expect("(");
      WhileStmt w;
      w.cond = condition();
      expect(")");
      w.body = block();
      s.node = std::move(w);
    } else if (is_word("loop")) {
      next();
      s.node = LoopStmt{block()};
    } else if (is_word("either")) {
      next();
      EitherStmt e;
      e.branches.push_back(block());
      if (!is_word("or")) throw ParseError(peek().pos, "expected 'or', found " + describe(peek()));
      while (is_word("or")) {
        next();
        e.branches.push_back(block());
      }
      s.node = std::move(e);
    } else {
      AssignStmt a;
      a.target = ident("statement");
      expect(":=");
      a.expr = expression();
      s.node = std::move(a);
      expect(";");
    }
    return s;
  }

  IfStmt if_statement() {
    expect_word("if");
    expect("(");
    IfStmt s;
    s.cond = condition();
    expect(")");
    s.then_branch = block();
    if (is_word("else")) {
      next();
      if (is_word("if")) {
        Stmt nested;
        nested.pos = peek().pos;
        nested.node = if_statement();
        s.else_branch.push_back(std::move(nested));
      } else {
        s.else_branch = block();
      }
    }
    return s;
  }

  // -------- conditions

  Formula condition() {
    Formula lhs = disjunction();
    if (is_punct("->")) {
      next();
      return logic::mk_implies(lhs, condition());
    }
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (is_punct("||")) {
      next();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? parts[0] : logic::mk_or(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{negation()};
    while (is_punct("&&")) {
      next();
      parts.push_back(negation());
    }
    return parts.size() == 1 ? parts[0] : logic::mk_and(std::move(parts));
  }

  Formula negation() {
    if (is_punct("!")) {
      next();
      return logic::mk_not(negation());
    }
    if (is_word("true")) {
      next();
      return logic::mk_true();
    }
    if (is_word("false")) {
      next();
      return logic::mk_false();
    }
    // A '(' may open either a parenthesized condition or an arithmetic
    // operand of a comparison; try the comparison first.
    std::size_t save = i_;
    try {
      return comparison();
    } catch (const ParseError &) {
      if (toks_[save].kind != Tok::Punct || toks_[save].text != "(") throw;
      i_ = save;
    }
    expect("(");
    Formula f = condition();
    expect(")");
    return f;
  }

  Formula comparison() {
    Term lhs = expression();
    static const std::pair<const char *, CmpOp> ops[] = {{"==", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<=", CmpOp::Le},
                                                         {">=", CmpOp::Ge}, {"<", CmpOp::Lt},  {">", CmpOp::Gt}};
    for (const auto &[text, op] : ops) {
      if (is_punct(text)) {
        next();
        return logic::mk_cmp(op, lhs, expression());
      }
    }
    throw ParseError(peek().pos, "expected comparison operator, found " + describe(peek()));
  }

  // -------- terms

  Term expression() {
    Term t = product();
    while (is_punct("+") || is_punct("-")) {
      bool plus = next().text == "+";
      Term rhs = product();
      t = plus ? logic::mk_add(t, rhs) : logic::mk_sub(t, rhs);
    }
    return t;
  }

  Term product() {
    Term t = unary();
    while (is_punct("*") || is_punct("/") || is_punct("%")) {
      const Token &op = next();
      SourcePos pos = op.pos;
      std::string text = op.text;
      Term rhs = unary();
      try {
        if (text == "*") {
          t = logic::mk_mul(t, rhs);
        } else {
          if (!rhs.is_literal()) throw logic::NonlinearError("divisor must be an integer literal");
          t = text == "/" ? logic::mk_div(t, rhs.value()) : logic::mk_mod(t, rhs.value());
        }
      } catch (const logic::NonlinearError &e) {
        throw ParseError(pos, std::string("nonlinear arithmetic: ") + e.what());
      }
    }
    return t;
  }

  Term unary() {
    if (is_punct("-")) {
      next();
      return logic::mk_neg(unary());
    }
    if (peek().kind == Tok::Int) return logic::mk_int(next().value);
    if (is_punct("(")) {
      next();
      Term t = expression();
      expect(")");
      return t;
    }
    std::string name = ident("expression");
    if (in_spec_) {
      expect("@");
      std::string trace = ident("trace variable");
      return logic::mk_var(trace_variable(trace, name));
    }
    if (is_punct("@")) throw ParseError(peek().pos, "trace-indexed variable outside a specification");
    return logic::mk_var(name);
  }

  // -------- specification

  SpecAst spec() {
    SpecAst s;
    while (is_word("forall") || is_word("exists")) {
      QuantifierAst q;
      q.pos = peek().pos;
      q.kind = next().text == "forall" ? QuantKind::Forall : QuantKind::Exists;
      q.trace = ident("trace variable");
      expect_word("in");
      q.program = ident("program name");
      if (is_word("obs")) {
        next();
        expect("{");
        std::vector<std::string> labels;
        if (!is_punct("}")) {
          labels.push_back(ident("observation label"));
          while (is_punct(",")) {
            next();
            labels.push_back(ident("observation label"));
          }
        }
        expect("}");
        q.labels = std::move(labels);
      }
      expect(".");
      s.quantifiers.push_back(std::move(q));
    }
    expect_word("always");
    expect("(");
    in_spec_ = true;
    s.body = condition();
    in_spec_ = false;
    expect(")");
    if (is_punct(";")) next();
    return s;
  }
};

// ---------------------------------------------------------------- checks

void collect_stmt_vars(const StmtList &stmts, std::set<std::string> &vars, std::vector<std::string> &labels,
                       std::vector<SourcePos> &label_pos) {
  for (const Stmt &s : stmts) {
    std::visit(
        [&](const auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, AssignStmt>) {
            vars.insert(n.target);
            logic::collect_free_vars(n.expr, vars);
          } else if constexpr (std::is_same_v<T, HavocStmt>) {
            vars.insert(n.target);
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            logic::collect_free_vars(n.cond, vars);
            collect_stmt_vars(n.then_branch, vars, labels, label_pos);
            collect_stmt_vars(n.else_branch, vars, labels, label_pos);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            logic::collect_free_vars(n.cond, vars);
            collect_stmt_vars(n.body, vars, labels, label_pos);
          } else if constexpr (std::is_same_v<T, LoopStmt>) {
            collect_stmt_vars(n.body, vars, labels, label_pos);
          } else if constexpr (std::is_same_v<T, EitherStmt>) {
            for (const auto &b : n.branches) collect_stmt_vars(b, vars, labels, label_pos);
          } else if constexpr (std::is_same_v<T, ObserveStmt>) {
            labels.push_back(n.label);
            label_pos.push_back(s.pos);
          }
        },
        s.node);
  }
}

void check(SourceFile &f) {
  std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> info;  // vars, labels
  for (ProgramAst &p : f.programs) {
    if (info.count(p.name)) throw ParseError(p.pos, "duplicate program '" + p.name + "'");
    std::set<std::string> vars;
    std::vector<std::string> labels;
    std::vector<SourcePos> label_pos;
    collect_stmt_vars(p.body, vars, labels, label_pos);
    for (const auto &v : vars)
      if (v.find('.') != std::string::npos) throw ParseError(p.pos, "invalid variable name '" + v + "'");
    p.variables.assign(vars.begin(), vars.end());
    info[p.name] = {vars, std::set<std::string>(labels.begin(), labels.end())};
  }

  const auto &qs = f.spec.quantifiers;
  bool seen_exists = false;
  for (const auto &q : qs) {
    if (q.kind == QuantKind::Exists) seen_exists = true;
    else if (seen_exists) throw ParseError(q.pos, "unsupported quantifier prefix: universal after existential");
  }
  if (qs.empty() || qs.front().kind != QuantKind::Forall)
    throw ParseError(qs.empty() ? SourcePos{} : qs.front().pos,
                     "unsupported quantifier prefix: at least one leading 'forall' is required");

  std::map<std::string, const QuantifierAst *> traces;
  for (const auto &q : qs) {
    if (traces.count(q.trace)) throw ParseError(q.pos, "trace variable '" + q.trace + "' bound twice");
    traces[q.trace] = &q;
    auto it = info.find(q.program);
    if (it == info.end()) throw ParseError(q.pos, "unknown program '" + q.program + "'");
    if (q.labels) {
      if (q.labels->empty()) throw ParseError(q.pos, "empty observation set for '" + q.trace + "'");
      for (const auto &l : *q.labels)
        if (!it->second.second.count(l))
          throw ParseError(q.pos, "unknown observation label '" + l + "' in program '" + q.program + "'");
    } else if (it->second.second.empty()) {
      throw ParseError(q.pos, "program '" + q.program + "' has no observe statement");
    }
  }

  for (const auto &v : logic::free_vars(f.spec.body)) {
    auto dot = v.find('.');
    std::string trace = v.substr(0, dot), var = v.substr(dot + 1);
    auto it = traces.find(trace);
    if (it == traces.end()) throw ParseError(qs.back().pos, "unbound trace variable '" + trace + "' in body");
    if (!info[it->second->program].first.count(var))
      throw ParseError(qs.back().pos,
                       "unknown variable '" + var + "' of program '" + it->second->program + "' in body");
  }
}

// ---------------------------------------------------------------- lowering

class Lowerer {
 public:
  using Slot = std::optional<graph::Location>;
  using Pending = std::optional<Formula>;  // nullopt: `from` is exclusively ours

  LoweredProgram run(const ProgramAst &ast) {
    for (const auto &v : ast.variables) out_.graph.add_variable(v);
    graph::Location init = fresh();
    out_.graph.set_initial(init);
    Slot exit;
    if (!ast.body.empty()) seq(ast.body, init, std::nullopt, exit, true);
    return std::move(out_);
  }

 private:
  LoweredProgram out_;
  std::set<std::uint32_t> observed_;

  graph::Location fresh() {
    return out_.graph.add_location("l" + std::to_string(out_.graph.num_locations()));
  }
  graph::Location get(Slot &s) {
    if (!s) s = fresh();
    return *s;
  }
  void edge(graph::Location from, graph::Location to, const Pending &p, Formula guard, graph::Effect eff) {
    Formula g = p ? logic::mk_and(*p, guard) : guard;
    out_.graph.add_edge(from, to, g, std::move(eff));
  }

  void mark(graph::Location l, const std::string &label) {
    observed_.insert(l.id);
    out_.labels[label].push_back(l);
    out_.observe_points.push_back(l);
  }

  // `owns_exit`: no sibling can target `exit`, so a trailing observation
  // point may itself become the exit instead of getting a skip edge to it.
  void seq(const StmtList &stmts, graph::Location from, Pending pending, Slot &exit, bool owns_exit = false) {
    if (stmts.empty()) {
      edge(from, get(exit), pending, logic::mk_true(), graph::Skip{});
      return;
    }
    graph::Location cur = from;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      bool last = i + 1 == stmts.size();
      Slot local;
      Slot &next = last ? exit : local;
      if (const auto *o = std::get_if<ObserveStmt>(&stmts[i].node)) {
        if (!pending && !observed_.count(cur.id)) {
          // The current location is ours alone: observe it in place, but
          // force later loops to open their own head so it is not revisited.
          mark(cur, o->label);
          if (last) close(cur, exit, owns_exit);
          pending = logic::mk_true();
          continue;
        }
        graph::Location l = fresh();
        edge(cur, l, pending, logic::mk_true(), graph::Skip{});
        mark(l, o->label);
        if (last) close(l, exit, owns_exit);
        cur = l;
        pending = logic::mk_true();
        continue;
      }
      stmt(stmts[i], cur, pending, next);
      if (!next) return;  // control never continues past an infinite loop
      cur = *next;
      pending.reset();
    }
  }

  void close(graph::Location l, Slot &exit, bool owns_exit) {
    if (owns_exit && !exit) exit = l;
    else edge(l, get(exit), std::nullopt, logic::mk_true(), graph::Skip{});
  }

  graph::Location head_for(graph::Location from, const Pending &pending) {
    if (!pending) return from;
    graph::Location h = fresh();
    edge(from, h, pending, logic::mk_true(), graph::Skip{});
    return h;
  }

  void stmt(const Stmt &s, graph::Location from, const Pending &pending, Slot &exit) {
    std::visit(
        [&](const auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, AssignStmt>) {
            edge(from, get(exit), pending, logic::mk_true(), graph::Assign{n.target, n.expr});
          } else if constexpr (std::is_same_v<T, HavocStmt>) {
            edge(from, get(exit), pending, logic::mk_true(), graph::Havoc{n.target});
          } else if constexpr (std::is_same_v<T, SkipStmt>) {
            edge(from, get(exit), pending, logic::mk_true(), graph::Skip{});
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            Formula base = pending.value_or(logic::mk_true());
            seq(n.then_branch, from, logic::mk_and(base, n.cond), exit);
            seq(n.else_branch, from, logic::mk_and(base, logic::mk_not(n.cond)), exit);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            graph::Location head = head_for(from, pending);
            Slot back = head;
            seq(n.body, head, n.cond, back);
            edge(head, get(exit), logic::mk_not(n.cond), logic::mk_true(), graph::Skip{});
          } else if constexpr (std::is_same_v<T, LoopStmt>) {
            graph::Location head = head_for(from, pending);
            Slot back = head;
            seq(n.body, head, std::nullopt, back);
          } else if constexpr (std::is_same_v<T, EitherStmt>) {
            for (const auto &b : n.branches) seq(b, from, pending.value_or(logic::mk_true()), exit);
          }
        },
        s.node);
  }
};

}  // namespace

SourceFile parse(std::string_view text) {
  Parser p(text);
  SourceFile f = p.file();
  check(f);
  return f;
}

StmtList parse_statements(std::string_view text) {
  Parser p(text);
  return p.statements_only();
}

LoweredProgram lower(const ProgramAst &ast) {
  ProgramAst copy = ast;
  if (copy.variables.empty()) {
    std::set<std::string> vars;
    std::vector<std::string> labels;
    std::vector<SourcePos> pos;
    collect_stmt_vars(copy.body, vars, labels, pos);
    copy.variables.assign(vars.begin(), vars.end());
  }
  return Lowerer().run(copy);
}

Problem load(std::string_view text) {
  SourceFile f = parse(text);
  Problem prob;
  for (const ProgramAst &p : f.programs) prob.programs.emplace(p.name, lower(p));

  for (const QuantifierAst &qa : f.spec.quantifiers) {
    const LoweredProgram &lp = prob.programs.at(qa.program);
    Quantifier q;
    q.kind = qa.kind;
    q.trace = qa.trace;
    q.members = {qa.trace};
    q.program = qa.program;
    q.graph = std::make_shared<const graph::ProgramGraph>(lp.graph.with_prefixed_variables(qa.trace + "."));
    if (qa.labels) {
      for (const auto &l : *qa.labels) {
        auto it = lp.labels.find(l);
        if (it != lp.labels.end())
          for (graph::Location loc : it->second) q.observed.insert(loc);
      }
    } else {
      for (graph::Location loc : lp.observe_points) q.observed.insert(loc);
    }
    if (q.observed.empty())
      throw ParseError(qa.pos, "observation set of '" + qa.trace + "' has no reachable location");
    prob.spec.quantifiers.push_back(std::move(q));
  }
  prob.spec.body = f.spec.body;
  return prob;
}

Problem load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load(ss.str());
}

}  // namespace hyperfind::frontend
